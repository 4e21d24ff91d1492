#include "lrcert/lyapunov.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "lrcert/errors.hpp"

namespace lrcert {

double clipped_cost(std::span<const double> s, double c_bar) {
  double sq = 0.0;
  for (double v : s) sq += v * v;
  return std::min(sq, c_bar);
}

LyapunovFn::LyapunovFn(DenseNet f, double sigma, double c_bar, double alpha3)
    : f_(std::move(f)), sigma_(sigma), c_bar_(c_bar), alpha3_(alpha3) {
  if (!(sigma_ > 0.0) || !(c_bar_ > 0.0) || !(alpha3_ > 0.0)) {
    throw InvalidParameterError("Lyapunov function needs sigma, c_bar, alpha3 > 0");
  }
  if (f_.output_width() != 1) throw ShapeError("Lyapunov network must have a scalar output");
  const std::vector<double> origin(f_.input_width(), 0.0);
  f_origin_ = f_.forward(origin)[0];
}

double LyapunovFn::operator()(std::span<const double> s) const {
  const double d = f_.forward(s)[0] - f_origin_;
  return d * d + sigma_ * clipped_cost(s, c_bar_);
}

double eval_L(const LyapunovFn& lf, std::span<const double> s) { return lf(s); }

double delta_L(const LyapunovFn& lf, std::span<const double> s, std::span<const double> s_next) {
  return lf(s_next) - lf(s) + lf.alpha3() * clipped_cost(s, lf.c_bar());
}

SandwichEstimate estimate_sandwich(const LyapunovFn& lf, std::span<const State> states) {
  SandwichEstimate est;
  est.alpha1_hat = std::numeric_limits<double>::infinity();
  est.alpha2_hat = -std::numeric_limits<double>::infinity();
  for (const State& s : states) {
    const double c = clipped_cost(s, lf.c_bar());
    if (c == 0.0) continue;
    const double ratio = lf(s) / c;
    est.alpha1_hat = std::min(est.alpha1_hat, ratio);
    est.alpha2_hat = std::max(est.alpha2_hat, ratio);
    ++est.sample_count;
  }
  if (est.sample_count == 0) throw InsufficientDataError("no state with nonzero cost in the sandwich sample");
  return est;
}

}  // namespace lrcert
