#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "dual.hpp"
#include "lrcert/learner.hpp"
#include "lrcert/lyapunov.hpp"
#include "lrcert/policy.hpp"
#include "lrcert/trajectory.hpp"

namespace lrcert::testing {

// Two scalar states, two actions, fixed transition table. Small enough to
// enumerate every length-T trajectory exactly.
struct EnumMdp {
  std::array<double, 2> state_values{0.4, 1.3};
  std::array<double, 2> rho{0.6, 0.4};
  // next_prob[s][a] = P(s' = 1 | s, a)
  std::array<std::array<double, 2>, 2> next_prob{{{0.2, 0.7}, {0.35, 0.9}}};
  double c_bar = 1000.0;

  ActionSet actions() const { return ActionSet({{"left", -1.0}, {"right", 1.0}}); }

  double p_next(std::size_t s, std::size_t a, std::size_t s_next) const {
    return s_next == 1 ? next_prob[s][a] : 1.0 - next_prob[s][a];
  }
};

struct WeightedTrajectory {
  Trajectory traj;
  double probability = 0.0;
};

// Every trajectory of length T with its probability under the policy.
inline std::vector<WeightedTrajectory> enumerate(const EnumMdp& mdp, const SoftmaxPolicy& policy, std::size_t T) {
  std::vector<WeightedTrajectory> out;
  const std::size_t count = std::size_t{1} << (2 * T + 1);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<std::size_t> s_idx;
    std::vector<std::size_t> a_idx;
    std::size_t bits = code;
    s_idx.push_back(bits & 1u);
    bits >>= 1;
    for (std::size_t t = 0; t < T; ++t) {
      a_idx.push_back(bits & 1u);
      bits >>= 1;
      s_idx.push_back(bits & 1u);
      bits >>= 1;
    }
    double p = mdp.rho[s_idx[0]];
    std::vector<State> states;
    for (std::size_t s : s_idx) states.push_back({mdp.state_values[s]});
    for (std::size_t t = 0; t < T; ++t) {
      const auto probs = action_probs(policy, states[t]);
      p *= probs[a_idx[t]] * mdp.p_next(s_idx[t], a_idx[t], s_idx[t + 1]);
    }
    out.push_back({make_trajectory(std::move(states), std::move(a_idx), mdp.c_bar), p});
  }
  return out;
}

// Exact gradient of (1/T) E[sum_t L(s_{t+1}) - L(s_t) + alpha3 c(s_t)] with
// respect to the policy parameters, by forward-mode differentiation of the
// exact trajectory distribution.
inline std::vector<double> exact_delta_L_gradient(const EnumMdp& mdp, const SoftmaxPolicy& policy,
                                                  const LyapunovFn& lf, std::size_t T) {
  const auto& sizes = policy.net().layer_sizes();
  const auto& params = policy.net().params();
  const std::size_t n = params.size();
  std::array<std::vector<Dual>, 2> pi;
  for (std::size_t s = 0; s < 2; ++s) pi[s] = dual_softmax(dual_forward(sizes, params, {mdp.state_values[s]}));
  std::array<double, 2> L{};
  std::array<double, 2> c{};
  for (std::size_t s = 0; s < 2; ++s) {
    const State st{mdp.state_values[s]};
    L[s] = lf(st);
    c[s] = clipped_cost(st, mdp.c_bar);
  }

  Dual total(0.0, n);
  const std::size_t count = std::size_t{1} << (2 * T + 1);
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t bits = code;
    std::size_t s = bits & 1u;
    bits >>= 1;
    Dual p(mdp.rho[s], n);
    double sum = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t a = bits & 1u;
      bits >>= 1;
      const std::size_t s_next = bits & 1u;
      bits >>= 1;
      p = p * pi[s][a];
      p = mdp.p_next(s, a, s_next) * p;
      sum += L[s_next] - L[s] + lf.alpha3() * c[s];
      s = s_next;
    }
    total = total + (sum / static_cast<double>(T)) * p;
  }
  return total.d;
}

// Exact expectation of a per-trajectory estimator.
template <typename Estimator>
std::vector<double> expected_estimate(const std::vector<WeightedTrajectory>& all, std::size_t n, Estimator&& est) {
  std::vector<double> out(n, 0.0);
  for (const auto& w : all) {
    const std::vector<double> g = est(w.traj);
    for (std::size_t i = 0; i < n; ++i) out[i] += w.probability * g[i];
  }
  return out;
}

}  // namespace lrcert::testing
