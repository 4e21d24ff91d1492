#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lrcert/certificate.hpp"
#include "lrcert/config.hpp"
#include "lrcert/learner.hpp"

namespace lrcert {

// Process exit codes of the command-line tool.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int invalid_config = 2;  // also usage errors
inline constexpr int not_converged = 3;
inline constexpr int not_certified = 4;
inline constexpr int diverged = 5;
}  // namespace exit_code

// Writes into `out_dir` (created if missing):
//   config.json, log.csv, timing.csv, policy.ckpt, lyapunov_online.ckpt,
//   lyapunov_target.ckpt, summary.json
struct TrainOutcome {
  int exit_code = exit_code::error;
  std::optional<TrainResult> result;
};
TrainOutcome cmd_train(const RunConfig& config, const std::string& out_dir, std::ostream& messages);

struct EvalOptions {
  std::size_t rollouts = 3;
  std::vector<double> init_x;  // first state component per rollout, cycled; empty = draw from reset
  std::size_t steps = 500;
};

// Rolls out the policy without training termination. Writes rollout_NNN.csv
// per rollout and trajectories.csv holding all of them. Zero rollouts write
// nothing.
int cmd_eval(const RunConfig& config, const std::string& policy_checkpoint, const EvalOptions& options,
             const std::string& out_dir, std::ostream& messages);

struct CertifyOutcome {
  int exit_code = exit_code::error;
  std::optional<CertificateReport> report;
};
CertifyOutcome cmd_certify(const RunConfig& config, const std::string& trajectory_store,
                           const std::string& lyapunov_checkpoint, double gamma, double epsilon,
                           const std::string& report_path, std::ostream& messages);

struct GridSpec {
  std::vector<std::uint64_t> Ms;
  std::vector<std::uint64_t> Ts;
};

// "Mmin:Mmax:step,Tmin:Tmax:step"; throws InvalidInputError on malformed or
// empty ranges.
GridSpec parse_grid(const std::string& text);

int cmd_bound_surface(const RunConfig& config, const GridSpec& grid, double alpha2, const std::string& csv_path,
                      std::ostream& messages);

}  // namespace lrcert
