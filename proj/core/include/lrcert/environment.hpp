#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lrcert/rng.hpp"

namespace lrcert {

// Cartpole: (x, x_dot, theta, theta_dot). Linear system: (s).
using State = std::vector<double>;

struct Action {
  std::string label;
  double value = 0.0;  // force (N) or additive input

  friend bool operator==(const Action&, const Action&) = default;
};

class ActionSet {
 public:
  ActionSet() = default;
  explicit ActionSet(std::vector<Action> actions);

  std::size_t size() const noexcept { return actions_.size(); }
  const Action& operator[](std::size_t i) const { return actions_.at(i); }
  const std::vector<Action>& actions() const noexcept { return actions_; }

  // Throws InvalidActionError for an unknown label.
  std::size_t index_of(std::string_view label) const;
  void check_index(std::size_t index) const;

  friend bool operator==(const ActionSet&, const ActionSet&) = default;

 private:
  std::vector<Action> actions_;
};

// Cart-pole constants and equations follow the classic OpenAI Gym CartPole.
struct CartpoleSpec {
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double half_length = 0.5;
  double gravity = 9.8;
  double dt = 0.02;
  std::vector<double> forces{-10.0, 0.0, 10.0};
  double init_x_range = 1.0;       // x ~ U[-r, r]
  double init_other_range = 0.05;  // x_dot, theta, theta_dot ~ U[-r, r]
  double theta_threshold = 0.35;   // training episodes end once |theta| exceeds this
  std::size_t max_steps = 500;     // ... or once t exceeds this
};

// s' = a * s + input + w, w ~ N(0, w_std^2).
struct LinearSpec {
  double a = 0.9;
  double w_std = 0.1;
  std::vector<double> inputs{-0.1, 0.0, 0.1};
  double init_range = 1.0;
};

enum class Mode { training, evaluation };

class EnvSpec {
 public:
  EnvSpec() : EnvSpec(CartpoleSpec{}) {}
  explicit EnvSpec(CartpoleSpec spec);
  explicit EnvSpec(LinearSpec spec);

  bool is_cartpole() const noexcept { return std::holds_alternative<CartpoleSpec>(params_); }
  const CartpoleSpec& cartpole() const { return std::get<CartpoleSpec>(params_); }
  const LinearSpec& linear() const { return std::get<LinearSpec>(params_); }
  const std::variant<CartpoleSpec, LinearSpec>& params() const noexcept { return params_; }

  std::string name() const { return is_cartpole() ? "cartpole" : "linear"; }
  std::size_t state_dim() const noexcept { return is_cartpole() ? 4 : 1; }
  const ActionSet& actions() const noexcept { return actions_; }
  std::vector<std::string> state_labels() const;

 private:
  std::variant<CartpoleSpec, LinearSpec> params_;
  ActionSet actions_;
};

State reset(const EnvSpec& spec, RandomStream& rng);

// One transition. Cartpole is deterministic and draws nothing from rng; the
// linear system draws one normal variate when w_std > 0.
State step(const EnvSpec& spec, const State& s, std::size_t action, RandomStream& rng);
State step(const EnvSpec& spec, const State& s, std::string_view action_label, RandomStream& rng);

// Early-termination rule used while training. Never fires in evaluation mode
// or for the linear system.
bool training_terminated(const EnvSpec& spec, const State& s, std::size_t t, Mode mode = Mode::training);

}  // namespace lrcert
