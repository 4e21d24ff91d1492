#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lrcert/environment.hpp"

namespace lrcert {

enum class Algorithm { l_reinforce, reinforce };

// Update rule for the policy parameters.
enum class Optimizer { sgd, adam };

/// Every knob of a training run. Defaults reproduce the Cartpole setup:
/// M = 20, T = 250, alpha = 1e-2, tau = 0.005, alpha3 = 0.005, epsilon = 1e-4,
/// sigma = 0.01, c_bar = 1000, discount 0.995, b_bar = 10, Lyapunov network
/// (64, 16, 1) and policy network (32, 3).
///
/// `value_discount` (the TD discount) and `mixing_gamma` (the ergodicity
/// exponent used by the certificate) are separate settings.
struct RunConfig {
  std::string environment = "cartpole";
  CartpoleSpec cartpole;
  LinearSpec linear;

  std::size_t M = 20;
  std::size_t T = 250;
  double learning_rate = 1e-2;
  // tau * alpha: the per-step rate of the single-network soft replacement
  // phi <- (1 - tau) phi + tau (phi - alpha grad e^2).
  double value_learning_rate = 5e-5;
  double soft_replacement_tau = 0.005;
  double alpha3 = 0.005;
  double epsilon = 1e-4;
  double sigma = 0.01;
  double c_bar = 1000.0;
  double value_discount = 0.995;
  double mixing_gamma = 0.5;
  double bias_b_bar = 10.0;
  std::vector<std::size_t> lyapunov_layers{64, 16, 1};  // hidden widths then output
  std::vector<std::size_t> policy_layers{32, 3};
  Algorithm algorithm = Algorithm::l_reinforce;
  bool baseline = true;
  Optimizer policy_optimizer = Optimizer::sgd;

  std::uint64_t seed = 1;
  std::size_t iterations = 300;
  std::size_t threads = 1;
  std::string output_dir = "run";

  EnvSpec env_spec() const;
  // Full layer sizes including the state width.
  std::vector<std::size_t> lyapunov_sizes() const;
  std::vector<std::size_t> policy_sizes() const;

  // Throws ConfigError on inconsistent settings.
  void validate() const;
};

// Flat JSON object, one key per field. Unknown keys, wrong types and missing
// files are ConfigErrors that name the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

// FNV-1a hash of the canonical serialization without output_dir and
// threads, as 16 hex digits.
std::string config_hash(const RunConfig& config);

// "config_hash=<hex> seed=<n>", stamped into every artifact.
std::string provenance(const RunConfig& config);

std::string to_string(Algorithm a);
std::string to_string(Optimizer o);

}  // namespace lrcert
