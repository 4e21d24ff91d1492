#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lrcert/config.hpp"
#include "lrcert/dense_net.hpp"
#include "lrcert/environment.hpp"
#include "lrcert/lyapunov.hpp"
#include "lrcert/policy.hpp"
#include "lrcert/trajectory.hpp"

namespace lrcert {

// Stream ids are derived from (purpose, ...) paths so that initialization,
// training rollouts and evaluation rollouts never share random numbers.
enum class StreamPurpose : std::uint64_t { init = 0, training = 1, evaluation = 2 };

RandomStream make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t a, std::uint64_t b = 0);

// A single rollout of at most T steps from `initial`. In training mode the
// episode stops early once training_terminated fires.
Trajectory rollout(const EnvSpec& env, const SoftmaxPolicy& policy, State initial, std::size_t T, Mode mode,
                   double c_bar, RandomStream& rng);

/// M rollouts from the environment's initial distribution.
///
/// Trajectory m draws from stream (purpose, iteration, m) only, so the result
/// does not depend on `threads`. A divergence is rethrown with the trajectory
/// index in its message.
std::vector<Trajectory> collect_trajectories(const EnvSpec& env, const SoftmaxPolicy& policy, std::size_t M,
                                             std::size_t T, Mode mode, double c_bar, std::uint64_t seed,
                                             std::uint64_t iteration, std::size_t threads = 1,
                                             StreamPurpose purpose = StreamPurpose::training);

// l(tau, t) = sum_{j=t+1}^{n} c(s_j) + L(s_{n+1}) over the n recorded steps
// (1-based), so the last entry is L at the terminal state.
struct ReturnToGo {
  std::vector<double> l_values;
};

ReturnToGo returns_to_go(const Trajectory& traj, const LyapunovFn& lf);

// Per-step mean of l(tau, t) over the trajectories still running at step t.
std::vector<double> batch_mean_baseline(std::span<const Trajectory> trajectories, const LyapunovFn& lf);

/// Monte Carlo estimate of the gradient of E[delta_L] under the length-T
/// sampling distribution:
///   (1/M) sum_m (1/T) sum_t grad log pi(a_t | s_t) * (l(tau_m, t) - b_t).
/// T is each trajectory's horizon; truncated episodes contribute their
/// recorded steps only.
std::vector<double> lreinforce_gradient(std::span<const Trajectory> trajectories, const SoftmaxPolicy& policy,
                                        const LyapunovFn& lf,
                                        std::optional<std::span<const double>> baseline = std::nullopt);

// Vanilla REINFORCE: (1/M) sum_m sum_t grad log pi(a_t | s_t) * sum_{j>t} c(s_j).
std::vector<double> reinforce_gradient(std::span<const Trajectory> trajectories, const SoftmaxPolicy& policy);

struct ValueNets {
  DenseNet online;
  DenseNet target;
};

struct ValueUpdateStats {
  double mean_squared_td_error = 0.0;
  std::size_t transitions = 0;
};

/// TD(0) on the online value network with soft replacement of the target.
///
/// For each transition, in order, e = (c(s_t) - b_bar) + discount *
/// f_target(s_{t+1}) - f_online(s_t); the bootstrap term is dropped on the
/// final transition of an episode cut short by the termination rule. The
/// online network steps by `rate` along -grad e^2, then
/// target <- (1 - tau) target + tau online.
ValueUpdateStats value_target_update(std::span<const Trajectory> trajectories, ValueNets& nets, double discount,
                                     double b_bar, double rate, double tau);

// Average delta_L over every recorded transition of possibly truncated
// trajectories. Equals empirical_delta_L_avg on full-length data.
double pooled_delta_L_avg(std::span<const Trajectory> trajectories, const LyapunovFn& lf);

struct Alpha3Point {
  double alpha3 = 0.0;
  double delta_L = 0.0;
};

// Re-evaluates the pooled decrease statistic for each alpha3 on stored data.
std::vector<Alpha3Point> alpha3_sweep(std::span<const Trajectory> trajectories, const DenseNet& f, double sigma,
                                      double c_bar, std::span<const double> alpha3_values);

struct IterationLog {
  std::size_t iteration = 0;
  double empirical_delta_L = 0.0;
  double mean_episode_cost = 0.0;
  double mean_episode_length = 0.0;
  double alpha1_hat = 0.0;
  double alpha2_hat = 0.0;
  double wall_time_s = 0.0;
};

struct TrainState {
  SoftmaxPolicy policy;
  ValueNets value;
  std::size_t iteration = 0;  // completed iterations
  std::uint64_t seed = 0;
  std::vector<IterationLog> log;
};

enum class TrainStatus { converged, budget_exhausted, diverged };

struct TrainResult {
  TrainState state;  // after divergence: the last stable iteration
  TrainStatus status = TrainStatus::budget_exhausted;
  std::string message;
};

TrainState initial_train_state(const RunConfig& config);

// Lyapunov candidate built on the target value network.
LyapunovFn lyapunov_of(const RunConfig& config, const DenseNet& f);

/// Repeats { collect M trajectories; stop if the pooled delta_L <= -epsilon;
/// policy gradient step; value update } for at most config.iterations rounds.
TrainResult train(const RunConfig& config, const std::function<void(const IterationLog&)>& on_iteration = {});

}  // namespace lrcert
