// lrcert: train stabilizing policies and certify them from sampled rollouts.
//
//   lrcert train         --config run.json [--seed N] [--out DIR]
//   lrcert eval          --config run.json --checkpoint DIR/policy.ckpt [--rollouts N] [--init-x -1,0,1]
//                        [--steps 500] [--out DIR]
//   lrcert certify       --config run.json --trajectories DIR/trajectories.csv
//                        --checkpoint DIR/lyapunov_target.ckpt [--gamma G] [--epsilon E] [--out report.json]
//   lrcert bound-surface --config run.json --grid 1:1000:20,1:5000:100 [--alpha2 A] [--out surface.csv]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lrcert/commands.hpp"
#include "lrcert/errors.hpp"
#include "lrcert/text.hpp"

namespace {

lrcert::RunConfig resolve_config(const std::string& path, const std::optional<std::uint64_t>& seed) {
  lrcert::RunConfig config = path.empty() ? lrcert::RunConfig{} : lrcert::load_config(path);
  if (seed) config.seed = *seed;
  config.validate();
  return config;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (lrcert::trim(text).empty()) return out;
  for (auto part : lrcert::split(text, ',')) out.push_back(lrcert::parse_double(part, "--init-x entry"));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov-based policy learning with finite-sample stability certificates"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string checkpoint;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Run configuration (JSON); defaults apply when omitted");
    sub->add_option("--seed", seed, "Override the root seed");
  };

  auto* train = app.add_subcommand("train", "Run the training loop and write logs and checkpoints");
  add_common(train);
  train->add_option("--out", out, "Output directory (defaults to the config's output_dir)");

  lrcert::EvalOptions eval_options;
  std::string init_x = "-1,0,1";
  auto* eval = app.add_subcommand("eval", "Roll out a trained policy without training termination");
  add_common(eval);
  eval->add_option("--checkpoint", checkpoint, "Policy checkpoint")->required();
  eval->add_option("--rollouts", eval_options.rollouts, "Number of rollouts")->capture_default_str();
  eval->add_option("--init-x", init_x, "Initial first-state-component values, cycled over rollouts ('' = random)")
      ->capture_default_str();
  eval->add_option("--steps", eval_options.steps, "Steps per rollout")->capture_default_str();
  eval->add_option("--out", out, "Output directory")->required();

  std::string trajectories;
  std::optional<double> gamma;
  std::optional<double> epsilon;
  auto* certify = app.add_subcommand("certify", "Evaluate the finite-sample stability certificate");
  add_common(certify);
  certify->add_option("--trajectories", trajectories, "Trajectory store written by eval")->required();
  certify->add_option("--checkpoint", checkpoint, "Lyapunov network checkpoint")->required();
  certify->add_option("--gamma", gamma, "Ergodicity exponent in (0,1) (default: config mixing_gamma)");
  certify->add_option("--epsilon", epsilon, "Decrease margin (default: config epsilon)");
  certify->add_option("--out", out, "Report path")->capture_default_str();

  std::string grid_text;
  double alpha2 = 1.0;
  auto* surface = app.add_subcommand("bound-surface", "Tabulate the probability bound over an (M, T) grid");
  add_common(surface);
  surface->add_option("--grid", grid_text, "Mmin:Mmax:step,Tmin:Tmax:step")->required();
  surface->add_option("--alpha2", alpha2, "Upper sandwich constant")->capture_default_str();
  surface->add_option("--out", out, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lrcert::exit_code::invalid_config;
  }

  try {
    const lrcert::RunConfig config = resolve_config(config_path, seed);
    if (*train) {
      return lrcert::cmd_train(config, out.empty() ? config.output_dir : out, std::cout).exit_code;
    }
    if (*eval) {
      eval_options.init_x = parse_list(init_x);
      return lrcert::cmd_eval(config, checkpoint, eval_options, out, std::cout);
    }
    if (*certify) {
      return lrcert::cmd_certify(config, trajectories, checkpoint, gamma.value_or(config.mixing_gamma),
                                 epsilon.value_or(config.epsilon), out.empty() ? "report.json" : out, std::cout)
          .exit_code;
    }
    if (*surface) {
      return lrcert::cmd_bound_surface(config, lrcert::parse_grid(grid_text), alpha2,
                                       out.empty() ? "surface.csv" : out, std::cout);
    }
  } catch (const lrcert::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return lrcert::exit_code::invalid_config;
  } catch (const lrcert::InvalidInputError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return lrcert::exit_code::invalid_config;
  } catch (const lrcert::DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return lrcert::exit_code::diverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lrcert::exit_code::error;
  }
  return lrcert::exit_code::error;
}
