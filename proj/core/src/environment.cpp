#include "lrcert/environment.hpp"

#include <cmath>
#include <set>

#include "lrcert/errors.hpp"
#include "lrcert/text.hpp"

namespace lrcert {

namespace {

std::string value_label(const char* prefix, double v) { return std::string(prefix) + format_double(v); }

ActionSet cartpole_actions(const CartpoleSpec& spec) {
  std::vector<Action> actions;
  for (double f : spec.forces) actions.push_back({value_label("F=", f), f});
  return ActionSet(std::move(actions));
}

ActionSet linear_actions(const LinearSpec& spec) {
  std::vector<Action> actions;
  for (double u : spec.inputs) actions.push_back({value_label("u=", u), u});
  return ActionSet(std::move(actions));
}

void check_finite(const State& s, const char* what) {
  for (double v : s) {
    if (!std::isfinite(v)) throw DivergenceError(std::string(what) + " produced a non-finite state", s);
  }
}

State cartpole_step(const CartpoleSpec& p, const State& s, double force) {
  const double x = s[0], x_dot = s[1], theta = s[2], theta_dot = s[3];
  const double total_mass = p.cart_mass + p.pole_mass;
  const double polemass_length = p.pole_mass * p.half_length;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);

  const double temp = (force + polemass_length * theta_dot * theta_dot * sin_t) / total_mass;
  const double theta_acc =
      (p.gravity * sin_t - cos_t * temp) / (p.half_length * (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
  const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

  return {x + p.dt * x_dot, x_dot + p.dt * x_acc, theta + p.dt * theta_dot, theta_dot + p.dt * theta_acc};
}

}  // namespace

ActionSet::ActionSet(std::vector<Action> actions) : actions_(std::move(actions)) {
  if (actions_.empty()) throw InvalidInputError("action set must not be empty");
  std::set<std::string_view> seen;
  for (const auto& a : actions_) {
    if (!seen.insert(a.label).second) throw InvalidInputError("duplicate action label '" + a.label + "'");
  }
}

std::size_t ActionSet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i].label == label) return i;
  }
  throw InvalidActionError("unknown action '" + std::string(label) + "'");
}

void ActionSet::check_index(std::size_t index) const {
  if (index >= actions_.size()) {
    throw InvalidActionError("action index " + std::to_string(index) + " outside action set of size " +
                             std::to_string(actions_.size()));
  }
}

EnvSpec::EnvSpec(CartpoleSpec spec) : params_(std::move(spec)) {
  const auto& p = cartpole();
  if (!(p.dt > 0.0)) throw InvalidParameterError("integration step must be positive");
  actions_ = cartpole_actions(p);
}

EnvSpec::EnvSpec(LinearSpec spec) : params_(std::move(spec)) {
  const auto& p = linear();
  if (!(p.w_std >= 0.0)) throw InvalidParameterError("noise standard deviation must be nonnegative");
  actions_ = linear_actions(p);
}

std::vector<std::string> EnvSpec::state_labels() const {
  if (is_cartpole()) return {"x", "x_dot", "theta", "theta_dot"};
  return {"s"};
}

State reset(const EnvSpec& spec, RandomStream& rng) {
  if (spec.is_cartpole()) {
    const auto& p = spec.cartpole();
    State s(4);
    s[0] = rng.uniform(-p.init_x_range, p.init_x_range);
    for (std::size_t i = 1; i < 4; ++i) s[i] = rng.uniform(-p.init_other_range, p.init_other_range);
    return s;
  }
  const auto& p = spec.linear();
  return {rng.uniform(-p.init_range, p.init_range)};
}

State step(const EnvSpec& spec, const State& s, std::size_t action, RandomStream& rng) {
  spec.actions().check_index(action);
  if (s.size() != spec.state_dim()) {
    throw ShapeError("state has " + std::to_string(s.size()) + " components, environment expects " +
                     std::to_string(spec.state_dim()));
  }
  State next;
  if (spec.is_cartpole()) {
    next = cartpole_step(spec.cartpole(), s, spec.actions()[action].value);
  } else {
    const auto& p = spec.linear();
    const double noise = p.w_std > 0.0 ? p.w_std * rng.normal() : 0.0;
    next = {p.a * s[0] + spec.actions()[action].value + noise};
  }
  check_finite(next, spec.is_cartpole() ? "cartpole step" : "linear step");
  return next;
}

State step(const EnvSpec& spec, const State& s, std::string_view action_label, RandomStream& rng) {
  return step(spec, s, spec.actions().index_of(action_label), rng);
}

bool training_terminated(const EnvSpec& spec, const State& s, std::size_t t, Mode mode) {
  if (mode == Mode::evaluation || !spec.is_cartpole()) return false;
  const auto& p = spec.cartpole();
  return std::abs(s[2]) > p.theta_threshold || t > p.max_steps;
}

}  // namespace lrcert
