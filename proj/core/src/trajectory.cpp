#include "lrcert/trajectory.hpp"

#include <string>

#include "lrcert/errors.hpp"
#include "lrcert/lyapunov.hpp"

namespace lrcert {

Trajectory make_trajectory(std::vector<State> states, std::vector<std::size_t> actions, double c_bar) {
  Trajectory traj;
  traj.horizon = actions.size();
  traj.states = std::move(states);
  traj.actions = std::move(actions);
  traj.costs.reserve(traj.states.size());
  for (const State& s : traj.states) traj.costs.push_back(clipped_cost(s, c_bar));
  validate(traj);
  return traj;
}

void validate(const Trajectory& traj) {
  const std::size_t n = traj.effective_length();
  if (traj.states.size() != n + 1) {
    throw ProtocolError("trajectory with " + std::to_string(n) + " actions must carry " + std::to_string(n + 1) +
                        " states including the terminal state, found " + std::to_string(traj.states.size()));
  }
  if (traj.costs.size() != n + 1) throw ProtocolError("trajectory cost record has the wrong length");
  if (!traj.log_probs.empty() && traj.log_probs.size() != n) {
    throw ProtocolError("trajectory log-probability record has the wrong length");
  }
  if (n > traj.horizon) throw ProtocolError("trajectory is longer than its horizon");
}

std::size_t uniform_length(std::span<const Trajectory> trajectories) {
  if (trajectories.empty()) throw ProtocolError("no trajectories supplied");
  const std::size_t T = trajectories.front().effective_length();
  for (std::size_t m = 0; m < trajectories.size(); ++m) {
    const Trajectory& traj = trajectories[m];
    validate(traj);
    if (traj.truncated()) {
      throw ProtocolError("trajectory " + std::to_string(m) +
                          " was truncated by the training termination rule; certification uses only full-length "
                          "evaluation rollouts");
    }
    if (traj.effective_length() != T) {
      throw ProtocolError("ragged trajectory lengths: trajectory 0 has " + std::to_string(T) + " steps, trajectory " +
                          std::to_string(m) + " has " + std::to_string(traj.effective_length()) +
                          "; certification needs full-length evaluation rollouts of one common length");
    }
  }
  if (T == 0) throw ProtocolError("trajectories must contain at least one transition");
  return T;
}

}  // namespace lrcert
