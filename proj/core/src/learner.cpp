#include "lrcert/learner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "lrcert/errors.hpp"

namespace lrcert {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void axpy(std::vector<double>& acc, double scale, std::span<const double> v) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += scale * v[i];
}

void check_policy_shapes(std::span<const Trajectory> trajectories, const SoftmaxPolicy& policy) {
  for (const Trajectory& traj : trajectories) {
    validate(traj);
    if (traj.horizon == 0) throw ProtocolError("trajectory horizon must be positive");
    for (std::size_t a : traj.actions) {
      if (a >= policy.actions().size()) throw ProtocolError("trajectory action outside the policy's action set");
    }
  }
}

}  // namespace

RandomStream make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t a, std::uint64_t b) {
  return RandomStream(seed, derive_stream_id({static_cast<std::uint64_t>(purpose), a, b}));
}

Trajectory rollout(const EnvSpec& env, const SoftmaxPolicy& policy, State initial, std::size_t T, Mode mode,
                   double c_bar, RandomStream& rng) {
  Trajectory traj;
  traj.horizon = T;
  traj.states.reserve(T + 1);
  traj.actions.reserve(T);
  traj.log_probs.reserve(T);
  traj.states.push_back(std::move(initial));
  for (std::size_t t = 0; t < T; ++t) {
    const State& s = traj.states.back();
    if (training_terminated(env, s, t, mode)) break;
    const std::vector<double> probs = action_probs(policy, s);
    const std::size_t a = inverse_cdf(probs, rng.uniform());
    traj.actions.push_back(a);
    traj.log_probs.push_back(std::log(probs[a]));
    traj.states.push_back(step(env, s, a, rng));
  }
  traj.costs.reserve(traj.states.size());
  for (const State& s : traj.states) traj.costs.push_back(clipped_cost(s, c_bar));
  return traj;
}

std::vector<Trajectory> collect_trajectories(const EnvSpec& env, const SoftmaxPolicy& policy, std::size_t M,
                                             std::size_t T, Mode mode, double c_bar, std::uint64_t seed,
                                             std::uint64_t iteration, std::size_t threads, StreamPurpose purpose) {
  if (M < 1 || T < 1) throw InvalidParameterError("collect_trajectories needs M >= 1 and T >= 1");
  std::vector<Trajectory> out(M);
  std::vector<std::exception_ptr> errors(M);

  auto run_one = [&](std::size_t m) {
    try {
      RandomStream rng = make_stream(seed, purpose, iteration, m);
      State s0 = reset(env, rng);
      out[m] = rollout(env, policy, std::move(s0), T, mode, c_bar, rng);
    } catch (...) {
      errors[m] = std::current_exception();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, M);
  if (workers == 1) {
    for (std::size_t m = 0; m < M; ++m) run_one(m);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t m = w; m < M; m += workers) run_one(m);
      });
    }
  }

  for (std::size_t m = 0; m < M; ++m) {
    if (!errors[m]) continue;
    try {
      std::rethrow_exception(errors[m]);
    } catch (const DivergenceError& e) {
      throw DivergenceError("trajectory " + std::to_string(m) + ": " + e.what(), e.state());
    }
  }
  return out;
}

ReturnToGo returns_to_go(const Trajectory& traj, const LyapunovFn& lf) {
  validate(traj);
  const std::size_t n = traj.effective_length();
  ReturnToGo r;
  r.l_values.assign(n, 0.0);
  if (n == 0) return r;
  double acc = lf(traj.states[n]);
  r.l_values[n - 1] = acc;
  for (std::size_t t = n - 1; t-- > 0;) {
    acc += traj.costs[t + 1];
    r.l_values[t] = acc;
  }
  return r;
}

std::vector<double> batch_mean_baseline(std::span<const Trajectory> trajectories, const LyapunovFn& lf) {
  std::size_t longest = 0;
  for (const Trajectory& traj : trajectories) longest = std::max(longest, traj.effective_length());
  std::vector<double> sum(longest, 0.0);
  std::vector<std::size_t> count(longest, 0);
  for (const Trajectory& traj : trajectories) {
    const ReturnToGo r = returns_to_go(traj, lf);
    for (std::size_t t = 0; t < r.l_values.size(); ++t) {
      sum[t] += r.l_values[t];
      ++count[t];
    }
  }
  for (std::size_t t = 0; t < longest; ++t) sum[t] /= static_cast<double>(count[t]);
  return sum;
}

std::vector<double> lreinforce_gradient(std::span<const Trajectory> trajectories, const SoftmaxPolicy& policy,
                                        const LyapunovFn& lf, std::optional<std::span<const double>> baseline) {
  if (trajectories.empty()) throw ProtocolError("no trajectories supplied");
  check_policy_shapes(trajectories, policy);
  std::vector<double> grad(policy.net().param_count(), 0.0);
  const double inv_M = 1.0 / static_cast<double>(trajectories.size());
  for (const Trajectory& traj : trajectories) {
    const std::size_t n = traj.effective_length();
    if (baseline && baseline->size() < n) throw ProtocolError("baseline shorter than trajectory");
    const ReturnToGo r = returns_to_go(traj, lf);
    const double scale = inv_M / static_cast<double>(traj.horizon);
    for (std::size_t t = 0; t < n; ++t) {
      const double weight = r.l_values[t] - (baseline ? (*baseline)[t] : 0.0);
      axpy(grad, scale * weight, grad_log_prob(policy, traj.states[t], traj.actions[t]));
    }
  }
  return grad;
}

std::vector<double> reinforce_gradient(std::span<const Trajectory> trajectories, const SoftmaxPolicy& policy) {
  if (trajectories.empty()) throw ProtocolError("no trajectories supplied");
  check_policy_shapes(trajectories, policy);
  std::vector<double> grad(policy.net().param_count(), 0.0);
  const double inv_M = 1.0 / static_cast<double>(trajectories.size());
  for (const Trajectory& traj : trajectories) {
    const std::size_t n = traj.effective_length();
    double suffix = 0.0;  // sum_{j > t} c(s_j) over recorded steps
    std::vector<double> cost_to_go(n, 0.0);
    for (std::size_t t = n; t-- > 0;) {
      cost_to_go[t] = suffix;
      suffix += traj.costs[t];
    }
    for (std::size_t t = 0; t < n; ++t) {
      axpy(grad, inv_M * cost_to_go[t], grad_log_prob(policy, traj.states[t], traj.actions[t]));
    }
  }
  return grad;
}

ValueUpdateStats value_target_update(std::span<const Trajectory> trajectories, ValueNets& nets, double discount,
                                     double b_bar, double rate, double tau) {
  if (nets.online.layer_sizes() != nets.target.layer_sizes()) {
    throw ShapeError("online and target value networks differ in layout");
  }
  for (const Trajectory& traj : trajectories) validate(traj);
  ValueUpdateStats stats;
  double sq_sum = 0.0;
  const double upstream = 1.0;
  // One SGD step and one soft replacement per transition, in trajectory order.
  for (const Trajectory& traj : trajectories) {
    const std::size_t n = traj.effective_length();
    for (std::size_t t = 0; t < n; ++t) {
      const bool absorbing = traj.truncated() && t + 1 == n;
      const double bootstrap = absorbing ? 0.0 : discount * nets.target.forward(traj.states[t + 1])[0];
      const GradientRecord rec = nets.online.backward(traj.states[t], std::span(&upstream, 1));
      const double e = (traj.costs[t] - b_bar) + bootstrap - rec.value[0];
      // d(e^2)/d(phi) = -2 e df/dphi
      std::vector<double> grad = rec.grad_params;
      for (double& g : grad) g *= -2.0 * e;
      nets.online.set_params(sgd_step(nets.online.params(), grad, rate));
      nets.target.set_params(soft_replace(nets.target.params(), nets.online.params(), tau));
      sq_sum += e * e;
      ++stats.transitions;
    }
  }
  if (stats.transitions > 0) stats.mean_squared_td_error = sq_sum / static_cast<double>(stats.transitions);
  return stats;
}

double pooled_delta_L_avg(std::span<const Trajectory> trajectories, const LyapunovFn& lf) {
  double total = 0.0;
  std::size_t count = 0;
  for (const Trajectory& traj : trajectories) {
    validate(traj);
    const std::size_t n = traj.effective_length();
    if (n == 0) continue;
    double L_prev = lf(traj.states[0]);
    for (std::size_t t = 0; t < n; ++t) {
      const double L_next = lf(traj.states[t + 1]);
      total += L_next - L_prev + lf.alpha3() * traj.costs[t];
      L_prev = L_next;
    }
    count += n;
  }
  if (count == 0) throw InsufficientDataError("no transitions to average");
  return total / static_cast<double>(count);
}

std::vector<Alpha3Point> alpha3_sweep(std::span<const Trajectory> trajectories, const DenseNet& f, double sigma,
                                      double c_bar, std::span<const double> alpha3_values) {
  std::vector<Alpha3Point> out;
  out.reserve(alpha3_values.size());
  for (double a3 : alpha3_values) {
    const LyapunovFn lf(f, sigma, c_bar, a3);
    out.push_back({a3, pooled_delta_L_avg(trajectories, lf)});
  }
  return out;
}

TrainState initial_train_state(const RunConfig& config) {
  config.validate();
  const EnvSpec env = config.env_spec();
  RandomStream policy_rng = make_stream(config.seed, StreamPurpose::init, 0);
  RandomStream value_rng = make_stream(config.seed, StreamPurpose::init, 1);
  DenseNet value = DenseNet::initialized(config.lyapunov_sizes(), value_rng);
  TrainState state{SoftmaxPolicy(DenseNet::initialized(config.policy_sizes(), policy_rng), env.actions()),
                   ValueNets{value, value},
                   0,
                   config.seed,
                   {}};
  return state;
}

LyapunovFn lyapunov_of(const RunConfig& config, const DenseNet& f) {
  return LyapunovFn(f, config.sigma, config.c_bar, config.alpha3);
}

TrainResult train(const RunConfig& config, const std::function<void(const IterationLog&)>& on_iteration) {
  TrainResult result{initial_train_state(config), TrainStatus::budget_exhausted, {}};
  TrainState& state = result.state;
  const EnvSpec env = config.env_spec();
  const auto start = std::chrono::steady_clock::now();
  AdamState adam;

  for (std::size_t k = 0; k < config.iterations; ++k) {
    const LyapunovFn lf = lyapunov_of(config, state.value.target);
    std::vector<Trajectory> batch;
    try {
      batch = collect_trajectories(env, state.policy, config.M, config.T, Mode::training, config.c_bar, config.seed,
                                   k, config.threads);
    } catch (const DivergenceError& e) {
      result.status = TrainStatus::diverged;
      result.message = std::string("iteration ") + std::to_string(k) + ": " + e.what();
      return result;
    }

    IterationLog entry;
    entry.iteration = k;
    entry.empirical_delta_L = pooled_delta_L_avg(batch, lf);
    double cost_sum = 0.0;
    double length_sum = 0.0;
    std::vector<State> visited;
    for (const Trajectory& traj : batch) {
      for (std::size_t t = 0; t < traj.effective_length(); ++t) cost_sum += traj.costs[t];
      length_sum += static_cast<double>(traj.effective_length());
      visited.insert(visited.end(), traj.states.begin(), traj.states.end());
    }
    entry.mean_episode_cost = cost_sum / static_cast<double>(batch.size());
    entry.mean_episode_length = length_sum / static_cast<double>(batch.size());
    try {
      const SandwichEstimate est = estimate_sandwich(lf, visited);
      entry.alpha1_hat = est.alpha1_hat;
      entry.alpha2_hat = est.alpha2_hat;
    } catch (const InsufficientDataError&) {
      entry.alpha1_hat = entry.alpha2_hat = 0.0;
    }
    entry.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    state.log.push_back(entry);
    if (on_iteration) on_iteration(entry);

    if (entry.empirical_delta_L <= -config.epsilon) {
      result.status = TrainStatus::converged;
      state.iteration = k + 1;
      return result;
    }

    std::vector<double> grad;
    if (config.algorithm == Algorithm::l_reinforce) {
      if (config.baseline) {
        const std::vector<double> b = batch_mean_baseline(batch, lf);
        grad = lreinforce_gradient(batch, state.policy, lf, std::span<const double>(b));
      } else {
        grad = lreinforce_gradient(batch, state.policy, lf);
      }
    } else {
      grad = reinforce_gradient(batch, state.policy);
    }

    ValueNets value = state.value;
    value_target_update(batch, value, config.value_discount, config.bias_b_bar, config.value_learning_rate,
                        config.soft_replacement_tau);
    std::vector<double> theta = config.policy_optimizer == Optimizer::adam
                                    ? adam_step(state.policy.net().params(), grad, config.learning_rate, adam)
                                    : sgd_step(state.policy.net().params(), grad, config.learning_rate);
    if (!all_finite(theta) || !all_finite(value.online.params()) || !all_finite(value.target.params())) {
      result.status = TrainStatus::diverged;
      result.message = "iteration " + std::to_string(k) + ": parameter update produced non-finite values";
      return result;
    }
    state.policy.set_params(std::move(theta));
    state.value = std::move(value);
    state.iteration = k + 1;
  }
  return result;
}

}  // namespace lrcert
