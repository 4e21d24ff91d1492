#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrcert/lyapunov.hpp"
#include "lrcert/trajectory.hpp"

namespace lrcert {

/// Finite-sample mean-square stability certificate.
///
/// Given M trajectories of length T, a Lyapunov candidate with sandwich
/// constant alpha2, decrease weight alpha3, clip level c_bar and ergodicity
/// exponent gamma, define
///
///   b1 = (alpha3 + alpha2) * c_bar
///   b2 = (2 * alpha2 + alpha3) * c_bar
///   margin = epsilon - 2 * T^(gamma - 1) * b1
///
/// If the sample average of L(s_{t+1}) - L(s_t) + alpha3 * c(s_t) is at most
/// -epsilon and T >= (b1 / epsilon)^(1 / (1 - gamma)), the closed loop is mean
/// square stable with probability at least 1 - exp(-2 M (margin / b2)^2).
/// A nonpositive margin yields probability 0 (no guarantee).
struct CertificateInput {
  std::uint64_t M = 1;
  std::uint64_t T = 1;
  double epsilon = 1e-4;
  double alpha2 = 1.0;
  double alpha3 = 0.005;
  double gamma = 0.5;  // ergodicity exponent, 0 < gamma < 1
  double c_bar = 1000.0;
  double empirical_delta_L = 0.0;

  // Throws InvalidParameterError on a violated invariant.
  void validate() const;
};

struct BoundConstants {
  double b1 = 0.0;
  double b2 = 0.0;
};

BoundConstants bound_constants(double alpha2, double alpha3, double c_bar);

// p together with log(1 - p), which stays informative after p rounds to 1.
struct ProbabilityBound {
  double probability = 0.0;
  double log_one_minus_p = 0.0;
  double margin = 0.0;
};

ProbabilityBound probability_bound(const CertificateInput& input);
double stability_probability_bound(const CertificateInput& input);

inline constexpr std::uint64_t min_trajectory_length_unreachable = UINT64_MAX;

// ceil((b1 / epsilon)^(1 / (1 - gamma))), or min_trajectory_length_unreachable
// above 2^62.
std::uint64_t min_trajectory_length(double epsilon, double alpha2, double alpha3, double c_bar, double gamma);

// Smallest M whose probability bound reaches delta at the given T.
// Throws InfeasibleConfigError when the margin is nonpositive.
std::uint64_t required_M_for_confidence(double delta, std::uint64_t T, double epsilon, double alpha2, double alpha3,
                                        double c_bar, double gamma);

// Bias of the length-T sampling distribution relative to the stationary one:
// 2 * c_bar * (alpha3 + alpha2) * T^(gamma - 1).
double finite_horizon_bias_bound(double alpha2, double alpha3, double c_bar, double gamma, std::uint64_t T);

// Hoeffding tail exp(-2 M beta^2 / ((2 alpha2 + alpha3)^2 c_bar^2)) for the
// M-trajectory average undershooting its mean by beta.
double hoeffding_tail_bound(std::uint64_t M, double beta, double alpha2, double alpha3, double c_bar);

// (1 / (M T)) * sum over trajectories and steps of delta_L. Requires
// untruncated trajectories of one common length.
double empirical_delta_L_avg(std::span<const Trajectory> trajectories, const LyapunovFn& lf);

enum class Verdict { certified, not_certified };

struct CertificateReport {
  CertificateInput input;
  double b1 = 0.0;
  double b2 = 0.0;
  double margin = 0.0;
  double probability_lower_bound = 0.0;
  double log_one_minus_p = 0.0;
  std::uint64_t min_T = 0;
  bool decrease_condition_satisfied = false;
  bool min_T_satisfied = false;
  bool margin_positive = false;
  Verdict verdict = Verdict::not_certified;
  std::string reason;

  // Present when alpha2 was estimated from the visited states.
  std::optional<SandwichEstimate> sandwich;
};

// Verdict from an already-computed empirical average.
CertificateReport evaluate_certificate(const CertificateInput& input);

// Estimates alpha2 over every visited state, then evaluates the certificate.
CertificateReport certify(std::span<const Trajectory> trajectories, const LyapunovFn& lf, double gamma,
                          double epsilon);

std::string to_string(Verdict v);

struct SurfacePoint {
  std::uint64_t M = 0;
  std::uint64_t T = 0;
  double probability = 0.0;
};

// Probability bound over the Cartesian grid, M-major then T, in the given
// order. Throws InvalidInputError on an empty range.
std::vector<SurfacePoint> bound_surface(std::span<const std::uint64_t> Ms, std::span<const std::uint64_t> Ts,
                                        double epsilon, double alpha2, double alpha3, double c_bar, double gamma);

// Inclusive arithmetic range lo, lo + step, ... <= hi.
std::vector<std::uint64_t> integer_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t step);

}  // namespace lrcert
