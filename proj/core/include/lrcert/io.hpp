#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrcert/certificate.hpp"
#include "lrcert/environment.hpp"
#include "lrcert/learner.hpp"
#include "lrcert/trajectory.hpp"

namespace lrcert {

// CSV files start with a "# <provenance>" comment line when provenance is
// non-empty.

// One rollout: t,<state components>,action,cost. The terminal row leaves the
// action column empty.
void write_rollout_csv(std::ostream& out, const Trajectory& traj, const EnvSpec& env, const std::string& provenance);

// Trajectory store: trajectory,t,horizon,<state components>,action,cost.
void write_trajectory_store(std::ostream& out, std::span<const Trajectory> trajectories, const EnvSpec& env,
                            const std::string& provenance);
std::vector<Trajectory> read_trajectory_store(std::istream& in, double c_bar);
std::vector<Trajectory> load_trajectory_store(const std::string& path, double c_bar);

// iteration,empirical_delta_L,mean_episode_cost,mean_episode_length,alpha1_hat,alpha2_hat
// Wall time goes to a separate timing file so the log itself is reproducible.
void write_train_log(std::ostream& out, std::span<const IterationLog> log, const std::string& provenance);
void write_timing_log(std::ostream& out, std::span<const IterationLog> log);

// M,T,probability
void write_surface_csv(std::ostream& out, std::span<const SurfacePoint> grid, const std::string& provenance);

std::string report_to_json(const CertificateReport& report, const std::string& provenance);

}  // namespace lrcert
