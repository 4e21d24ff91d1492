#include "lrcert/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "lrcert/errors.hpp"
#include "lrcert/io.hpp"
#include "lrcert/text.hpp"

namespace lrcert {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::string status_name(TrainStatus s) {
  switch (s) {
    case TrainStatus::converged:
      return "converged";
    case TrainStatus::budget_exhausted:
      return "not_converged";
    case TrainStatus::diverged:
      return "diverged";
  }
  return "unknown";
}

void write_summary(const fs::path& path, const RunConfig& config, const TrainResult& result) {
  nlohmann::ordered_json doc;
  doc["status"] = status_name(result.status);
  if (!result.message.empty()) doc["message"] = result.message;
  doc["iterations_completed"] = result.state.iteration;
  doc["iterations_logged"] = result.state.log.size();
  if (!result.state.log.empty()) {
    const IterationLog& last = result.state.log.back();
    doc["final_empirical_delta_L"] = last.empirical_delta_L;
    doc["final_mean_episode_cost"] = last.mean_episode_cost;
  }
  doc["config_hash"] = config_hash(config);
  doc["seed"] = config.seed;
  doc["hyperparameters"] = {
      {"M", config.M},
      {"T", config.T},
      {"learning_rate", config.learning_rate},
      {"soft_replacement_tau", config.soft_replacement_tau},
      {"alpha3", config.alpha3},
      {"epsilon", config.epsilon},
      {"sigma", config.sigma},
      {"c_bar", config.c_bar},
      {"value_discount", config.value_discount},
      {"bias_b_bar", config.bias_b_bar},
      {"lyapunov_layers", config.lyapunov_layers},
      {"policy_layers", config.policy_layers},
  };
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::vector<std::uint64_t> parse_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidInputError("range '" + std::string(text) + "' must be lo:hi:step");
  long long lo = 0, hi = 0, step = 0;
  try {
    lo = parse_int(parts[0], "range start");
    hi = parse_int(parts[1], "range end");
    step = parse_int(parts[2], "range step");
  } catch (const LoadError& e) {
    throw InvalidInputError(e.what());
  }
  if (lo < 1 || step < 1) throw InvalidInputError("range '" + std::string(text) + "' needs lo >= 1 and step >= 1");
  if (hi < lo) throw InvalidInputError("range '" + std::string(text) + "' is empty");
  return integer_range(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi),
                       static_cast<std::uint64_t>(step));
}

}  // namespace

TrainOutcome cmd_train(const RunConfig& config, const std::string& out_dir, std::ostream& messages) {
  config.validate();
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const std::string prov = provenance(config);
  {
    auto out = open_out(dir / "config.json");
    out << serialize_config(config);
  }

  TrainOutcome outcome;
  outcome.result.emplace(train(config, [&](const IterationLog& e) {
    if (e.iteration % 10 == 0) {
      messages << "iteration " << e.iteration << "  delta_L " << format_double(e.empirical_delta_L) << "  cost "
               << format_double(e.mean_episode_cost) << "  length " << format_double(e.mean_episode_length) << '\n';
    }
  }));
  const TrainResult& result = *outcome.result;

  {
    auto out = open_out(dir / "log.csv");
    write_train_log(out, result.state.log, prov);
  }
  {
    auto out = open_out(dir / "timing.csv");
    write_timing_log(out, result.state.log);
  }
  save_policy((dir / "policy.ckpt").string(), result.state.policy, prov);
  save_checkpoint((dir / "lyapunov_online.ckpt").string(), result.state.value.online, prov);
  save_checkpoint((dir / "lyapunov_target.ckpt").string(), result.state.value.target, prov);
  write_summary(dir / "summary.json", config, result);

  switch (result.status) {
    case TrainStatus::converged:
      messages << "converged after " << result.state.log.size() << " iterations\n";
      outcome.exit_code = exit_code::ok;
      break;
    case TrainStatus::budget_exhausted:
      messages << "not converged within " << config.iterations << " iterations\n";
      outcome.exit_code = exit_code::not_converged;
      break;
    case TrainStatus::diverged:
      messages << "diverged: " << result.message << '\n';
      outcome.exit_code = exit_code::diverged;
      break;
  }
  return outcome;
}

int cmd_eval(const RunConfig& config, const std::string& policy_checkpoint, const EvalOptions& options,
             const std::string& out_dir, std::ostream& messages) {
  config.validate();
  const EnvSpec env = config.env_spec();
  const SoftmaxPolicy policy = load_policy(policy_checkpoint);
  if (policy.net().input_width() != env.state_dim() || !(policy.actions() == env.actions())) {
    throw LoadError("policy checkpoint " + policy_checkpoint + " does not match the " + env.name() +
                    " environment in the config");
  }
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const std::string prov = provenance(config);

  std::vector<Trajectory> rollouts;
  rollouts.reserve(options.rollouts);
  for (std::size_t i = 0; i < options.rollouts; ++i) {
    RandomStream rng = make_stream(config.seed, StreamPurpose::evaluation, i);
    State s0 = reset(env, rng);
    if (!options.init_x.empty()) s0[0] = options.init_x[i % options.init_x.size()];
    rollouts.push_back(rollout(env, policy, std::move(s0), options.steps, Mode::evaluation, config.c_bar, rng));

    char name[32];
    std::snprintf(name, sizeof name, "rollout_%03zu.csv", i);
    auto out = open_out(dir / name);
    write_rollout_csv(out, rollouts.back(), env, prov);
  }
  if (!rollouts.empty()) {
    auto store = open_out(dir / "trajectories.csv");
    write_trajectory_store(store, rollouts, env, prov);
  }
  messages << "wrote " << rollouts.size() << " rollouts of " << options.steps << " steps to " << dir.string() << '\n';
  return exit_code::ok;
}

CertifyOutcome cmd_certify(const RunConfig& config, const std::string& trajectory_store,
                           const std::string& lyapunov_checkpoint, double gamma, double epsilon,
                           const std::string& report_path, std::ostream& messages) {
  config.validate();
  const std::vector<Trajectory> trajectories = load_trajectory_store(trajectory_store, config.c_bar);
  const DenseNet f = load_checkpoint(lyapunov_checkpoint);
  if (f.input_width() != config.env_spec().state_dim() || f.output_width() != 1) {
    throw LoadError("Lyapunov checkpoint " + lyapunov_checkpoint + " does not match the configured state width");
  }
  const LyapunovFn lf(f, config.sigma, config.c_bar, config.alpha3);

  CertifyOutcome outcome;
  const CertificateReport report = certify(trajectories, lf, gamma, epsilon);
  {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw Error("cannot open " + report_path + " for writing");
    out << report_to_json(report, provenance(config));
  }

  messages << to_string(report.verdict);
  if (report.verdict == Verdict::certified) {
    messages << ": mean square stable with probability at least " << format_double(report.probability_lower_bound);
  } else {
    messages << ": " << report.reason;
  }
  messages << "\n  M = " << report.input.M << ", T = " << report.input.T << ", min T = " << report.min_T
           << "\n  empirical delta_L = " << format_double(report.input.empirical_delta_L)
           << " (need <= " << format_double(-epsilon) << ")"
           << "\n  alpha2 (estimated) = " << format_double(report.input.alpha2) << ", b1 = " << format_double(report.b1)
           << ", b2 = " << format_double(report.b2) << ", margin = " << format_double(report.margin) << '\n';

  outcome.exit_code = report.verdict == Verdict::certified ? exit_code::ok : exit_code::not_certified;
  outcome.report = report;
  return outcome;
}

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InvalidInputError("grid must look like Mmin:Mmax:step,Tmin:Tmax:step");
  return {parse_range(trim(parts[0])), parse_range(trim(parts[1]))};
}

int cmd_bound_surface(const RunConfig& config, const GridSpec& grid, double alpha2, const std::string& csv_path,
                      std::ostream& messages) {
  config.validate();
  const auto points = bound_surface(grid.Ms, grid.Ts, config.epsilon, alpha2, config.alpha3, config.c_bar,
                                    config.mixing_gamma);
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw Error("cannot open " + csv_path + " for writing");
  write_surface_csv(out, points, provenance(config));
  messages << "wrote " << points.size() << " grid points to " << csv_path << " (min T = "
           << min_trajectory_length(config.epsilon, alpha2, config.alpha3, config.c_bar, config.mixing_gamma)
           << ")\n";
  return exit_code::ok;
}

}  // namespace lrcert
