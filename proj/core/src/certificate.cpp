#include "lrcert/certificate.hpp"

#include <cmath>
#include <limits>

#include "lrcert/errors.hpp"

namespace lrcert {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InvalidParameterError("ergodicity exponent gamma must lie in (0, 1), got " + std::to_string(gamma));
  }
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameterError(std::string(name) + " must be positive and finite");
  }
}

// epsilon - 2 T^(gamma-1) b1, in extended precision to limit cancellation.
long double margin_of(double epsilon, std::uint64_t T, double gamma, double b1) {
  const long double decay = std::pow(static_cast<long double>(T), static_cast<long double>(gamma) - 1.0L);
  return static_cast<long double>(epsilon) - 2.0L * decay * static_cast<long double>(b1);
}

}  // namespace

void CertificateInput::validate() const {
  if (M < 1) throw InvalidParameterError("M must be at least 1");
  if (T < 1) throw InvalidParameterError("T must be at least 1");
  check_positive(epsilon, "epsilon");
  check_positive(alpha2, "alpha2");
  check_positive(alpha3, "alpha3");
  check_positive(c_bar, "c_bar");
  check_gamma(gamma);
}

BoundConstants bound_constants(double alpha2, double alpha3, double c_bar) {
  return {(alpha3 + alpha2) * c_bar, (2.0 * alpha2 + alpha3) * c_bar};
}

ProbabilityBound probability_bound(const CertificateInput& input) {
  input.validate();
  const auto [b1, b2] = bound_constants(input.alpha2, input.alpha3, input.c_bar);
  const long double margin = margin_of(input.epsilon, input.T, input.gamma, b1);
  ProbabilityBound out;
  out.margin = static_cast<double>(margin);
  if (margin <= 0.0L) return out;
  const long double ratio = margin / static_cast<long double>(b2);
  const long double exponent = 2.0L * static_cast<long double>(input.M) * ratio * ratio;
  out.probability = static_cast<double>(-std::expm1(-exponent));
  out.log_one_minus_p = static_cast<double>(-exponent);
  return out;
}

double stability_probability_bound(const CertificateInput& input) { return probability_bound(input).probability; }

std::uint64_t min_trajectory_length(double epsilon, double alpha2, double alpha3, double c_bar, double gamma) {
  check_gamma(gamma);
  check_positive(epsilon, "epsilon");
  check_positive(c_bar, "c_bar");
  const long double b1 = (static_cast<long double>(alpha3) + alpha2) * c_bar;
  const long double value = std::pow(b1 / epsilon, 1.0L / (1.0L - gamma));
  // Saturates: no representable T satisfies the requirement.
  if (!std::isfinite(value) || value > 0x1.0p62L) return min_trajectory_length_unreachable;
  // An exact integer may come out a few ulps high; do not round it up.
  long double whole = std::floor(value);
  if (value - whole > value * 1e-15L) whole += 1.0L;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(whole));
}

std::uint64_t required_M_for_confidence(double delta, std::uint64_t T, double epsilon, double alpha2, double alpha3,
                                        double c_bar, double gamma) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameterError("confidence target delta must lie in (0, 1)");
  CertificateInput in;
  in.M = 1;
  in.T = T;
  in.epsilon = epsilon;
  in.alpha2 = alpha2;
  in.alpha3 = alpha3;
  in.c_bar = c_bar;
  in.gamma = gamma;
  in.validate();

  const auto [b1, b2] = bound_constants(alpha2, alpha3, c_bar);
  const long double margin = margin_of(epsilon, T, gamma, b1);
  if (margin <= 0.0L) {
    throw InfeasibleConfigError("certificate margin is nonpositive at T = " + std::to_string(T) +
                                "; raise T to at least min_trajectory_length = " +
                                std::to_string(min_trajectory_length(epsilon, alpha2, alpha3, c_bar, gamma)) +
                                " and well beyond it so that epsilon > 2 T^(gamma-1) b1");
  }
  const long double ratio = margin / b2;
  const long double needed = -std::log1p(-static_cast<long double>(delta)) / (2.0L * ratio * ratio);
  if (!(needed < 0x1.0p62L)) throw InfeasibleConfigError("required number of trajectories is not representable");
  std::uint64_t M = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(needed)));

  // Settle rounding against the exact bound evaluation.
  in.M = M;
  while (stability_probability_bound(in) < delta) in.M = ++M;
  while (M > 1) {
    in.M = M - 1;
    if (stability_probability_bound(in) < delta) break;
    --M;
  }
  return M;
}

double finite_horizon_bias_bound(double alpha2, double alpha3, double c_bar, double gamma, std::uint64_t T) {
  if (T < 1) throw InvalidParameterError("T must be at least 1");
  check_gamma(gamma);
  return 2.0 * c_bar * (alpha3 + alpha2) * std::pow(static_cast<double>(T), gamma - 1.0);
}

double hoeffding_tail_bound(std::uint64_t M, double beta, double alpha2, double alpha3, double c_bar) {
  if (!(beta >= 0.0)) throw InvalidParameterError("beta must be nonnegative");
  const double range = (2.0 * alpha2 + alpha3) * c_bar;
  return std::exp(-2.0 * static_cast<double>(M) * beta * beta / (range * range));
}

double empirical_delta_L_avg(std::span<const Trajectory> trajectories, const LyapunovFn& lf) {
  const std::size_t T = uniform_length(trajectories);
  double total = 0.0;
  for (const Trajectory& traj : trajectories) {
    for (std::size_t t = 0; t < T; ++t) total += delta_L(lf, traj.states[t], traj.states[t + 1]);
  }
  return total / (static_cast<double>(trajectories.size()) * static_cast<double>(T));
}

CertificateReport evaluate_certificate(const CertificateInput& input) {
  input.validate();
  CertificateReport r;
  r.input = input;
  const auto consts = bound_constants(input.alpha2, input.alpha3, input.c_bar);
  r.b1 = consts.b1;
  r.b2 = consts.b2;
  const ProbabilityBound pb = probability_bound(input);
  r.margin = pb.margin;
  r.probability_lower_bound = pb.probability;
  r.log_one_minus_p = pb.log_one_minus_p;
  r.min_T = min_trajectory_length(input.epsilon, input.alpha2, input.alpha3, input.c_bar, input.gamma);
  r.decrease_condition_satisfied = input.empirical_delta_L <= -input.epsilon;
  r.min_T_satisfied = input.T >= r.min_T;
  r.margin_positive = pb.margin > 0.0;

  // The minimum-T condition does not imply a positive margin, so both gates apply.
  if (!r.decrease_condition_satisfied) {
    r.reason = "empirical decrease condition fails: average delta_L exceeds -epsilon";
  } else if (!r.min_T_satisfied) {
    r.reason = "T below the minimum trajectory length";
  } else if (!r.margin_positive || !(r.probability_lower_bound > 0.0)) {
    r.reason = "certificate margin epsilon - 2 T^(gamma-1) b1 is nonpositive";
  } else {
    r.verdict = Verdict::certified;
  }
  return r;
}

CertificateReport certify(std::span<const Trajectory> trajectories, const LyapunovFn& lf, double gamma,
                          double epsilon) {
  const std::size_t T = uniform_length(trajectories);
  std::vector<State> visited;
  for (const Trajectory& traj : trajectories) visited.insert(visited.end(), traj.states.begin(), traj.states.end());
  const SandwichEstimate sandwich = estimate_sandwich(lf, visited);

  CertificateInput in;
  in.M = trajectories.size();
  in.T = T;
  in.epsilon = epsilon;
  in.alpha2 = sandwich.alpha2_hat;
  in.alpha3 = lf.alpha3();
  in.gamma = gamma;
  in.c_bar = lf.c_bar();
  in.empirical_delta_L = empirical_delta_L_avg(trajectories, lf);

  CertificateReport report = evaluate_certificate(in);
  report.sandwich = sandwich;
  return report;
}

std::string to_string(Verdict v) { return v == Verdict::certified ? "CERTIFIED" : "NOT_CERTIFIED"; }

std::vector<SurfacePoint> bound_surface(std::span<const std::uint64_t> Ms, std::span<const std::uint64_t> Ts,
                                        double epsilon, double alpha2, double alpha3, double c_bar, double gamma) {
  if (Ms.empty() || Ts.empty()) throw InvalidInputError("bound surface needs nonempty M and T ranges");
  CertificateInput in;
  in.epsilon = epsilon;
  in.alpha2 = alpha2;
  in.alpha3 = alpha3;
  in.c_bar = c_bar;
  in.gamma = gamma;
  const std::uint64_t min_T = min_trajectory_length(epsilon, alpha2, alpha3, c_bar, gamma);

  std::vector<SurfacePoint> grid;
  grid.reserve(Ms.size() * Ts.size());
  for (std::uint64_t M : Ms) {
    for (std::uint64_t T : Ts) {
      in.M = M;
      in.T = T;
      const double p = T < min_T ? 0.0 : stability_probability_bound(in);
      grid.push_back({M, T, p});
    }
  }
  return grid;
}

std::vector<std::uint64_t> integer_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t step) {
  if (step == 0) throw InvalidInputError("range step must be positive");
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = lo; v <= hi; v += step) {
    out.push_back(v);
    if (hi - v < step) break;
  }
  return out;
}

}  // namespace lrcert
