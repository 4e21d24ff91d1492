#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lrcert/environment.hpp"

namespace lrcert {

/// One rollout s_1, a_1, ..., s_T, a_T, s_{T+1}.
///
/// A training episode cut short by the termination rule has fewer than
/// `horizon` actions; its last state is the state at which it stopped.
struct Trajectory {
  std::vector<State> states;         // effective_length() + 1
  std::vector<std::size_t> actions;  // effective_length()
  std::vector<double> log_probs;     // log pi(a_t | s_t), empty if not recorded
  std::vector<double> costs;         // clipped_cost(states[t]), effective_length() + 1
  std::size_t horizon = 0;           // nominal T

  std::size_t effective_length() const noexcept { return actions.size(); }
  bool truncated() const noexcept { return actions.size() < horizon; }
};

// Builds a full-length trajectory (horizon = actions.size()) and fills costs.
Trajectory make_trajectory(std::vector<State> states, std::vector<std::size_t> actions, double c_bar);

// Throws ProtocolError unless the layout invariants hold.
void validate(const Trajectory& traj);

// Throws ProtocolError unless every trajectory is untruncated with the same
// length; returns that length. Empty input is an error.
std::size_t uniform_length(std::span<const Trajectory> trajectories);

}  // namespace lrcert
