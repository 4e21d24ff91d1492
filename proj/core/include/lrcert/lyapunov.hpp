#pragma once

#include <cstddef>
#include <span>

#include "lrcert/dense_net.hpp"
#include "lrcert/environment.hpp"

namespace lrcert {

// min(||s||_2^2, c_bar)
double clipped_cost(std::span<const double> s, double c_bar);

/// Lyapunov candidate L(s) = (f(s) - f(0))^2 + sigma * c(s).
///
/// f is a scalar-output network. f(0) is evaluated once at construction, so a
/// LyapunovFn is tied to one parameter version; build a new one after every
/// update. L(0) is exactly 0.
class LyapunovFn {
 public:
  LyapunovFn(DenseNet f, double sigma, double c_bar, double alpha3);

  const DenseNet& net() const noexcept { return f_; }
  double sigma() const noexcept { return sigma_; }
  double c_bar() const noexcept { return c_bar_; }
  double alpha3() const noexcept { return alpha3_; }
  double f_origin() const noexcept { return f_origin_; }

  double operator()(std::span<const double> s) const;

 private:
  DenseNet f_;
  double sigma_;
  double c_bar_;
  double alpha3_;
  double f_origin_;
};

double eval_L(const LyapunovFn& lf, std::span<const double> s);

// L(s_next) - L(s) + alpha3 * c(s)
double delta_L(const LyapunovFn& lf, std::span<const double> s, std::span<const double> s_next);

// Sample estimates of the tightest alpha1, alpha2 with
// alpha1 * c(s) <= L(s) <= alpha2 * c(s) over the sample.
struct SandwichEstimate {
  double alpha1_hat = 0.0;
  double alpha2_hat = 0.0;
  std::size_t sample_count = 0;  // states with c(s) > 0
};

// States with c(s) == 0 are skipped. Throws InsufficientDataError when none
// remain.
SandwichEstimate estimate_sandwich(const LyapunovFn& lf, std::span<const State> states);

}  // namespace lrcert
