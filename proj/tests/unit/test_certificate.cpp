#include <gtest/gtest.h>

#include <cmath>

#include "lrcert/certificate.hpp"
#include "lrcert/errors.hpp"

namespace lrcert {
namespace {

CertificateInput reference_input() {
  CertificateInput in;
  in.M = 10000;
  in.T = 10000;
  in.epsilon = 0.1;
  in.alpha2 = 1.0;
  in.alpha3 = 0.5;
  in.gamma = 0.5;
  in.c_bar = 1.0;
  in.empirical_delta_L = -0.2;
  return in;
}

TEST(BoundConstants, Definition) {
  const BoundConstants k = bound_constants(1.0, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(k.b1, 3.0);
  EXPECT_DOUBLE_EQ(k.b2, 5.0);
}

TEST(MinTrajectoryLength, Examples) {
  EXPECT_EQ(min_trajectory_length(0.1, 1.0, 0.5, 1.0, 0.5), 225u);
  EXPECT_EQ(min_trajectory_length(1.5, 1.0, 0.5, 1.0, 0.5), 1u);
  EXPECT_EQ(min_trajectory_length(3.0, 1.0, 0.5, 1.0, 0.5), 1u);
}

TEST(MinTrajectoryLength, IncreasesWithGamma) {
  std::uint64_t prev = 0;
  for (double g : {0.1, 0.3, 0.5, 0.7}) {
    const std::uint64_t v = min_trajectory_length(0.1, 1.0, 0.5, 1.0, g);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(MinTrajectoryLength, GammaOutsideUnitIntervalThrows) {
  EXPECT_THROW(min_trajectory_length(0.1, 1.0, 0.5, 1.0, 1.0), InvalidParameterError);
  EXPECT_THROW(min_trajectory_length(0.1, 1.0, 0.5, 1.0, 0.0), InvalidParameterError);
}

TEST(MinTrajectoryLength, SaturatesWhenUnreachable) {
  EXPECT_EQ(min_trajectory_length(1e-4, 1.0, 0.005, 1000.0, 0.9), min_trajectory_length_unreachable);
}

TEST(ProbabilityBound, ReferenceExample) {
  // b1 = 1.5, b2 = 2.5, margin / b2 = 0.028, exponent 2 * 1e4 * 0.028^2 = 15.68
  const ProbabilityBound pb = probability_bound(reference_input());
  EXPECT_NEAR(pb.margin, 0.07, 1e-15);
  EXPECT_NEAR(pb.probability, 1.0 - std::exp(-15.68), 1e-15);
  EXPECT_NEAR(pb.probability, 0.99999984, 1e-8);
  EXPECT_NEAR(pb.log_one_minus_p, -15.68, 1e-12);
}

TEST(ProbabilityBound, ZeroAtZeroMargin) {
  CertificateInput in = reference_input();
  in.T = 4;  // 2 * 4^(-1/2) * 1.5 = 1.5 exactly
  in.epsilon = 1.5;
  EXPECT_EQ(stability_probability_bound(in), 0.0);
  in.epsilon = 1.0;
  EXPECT_EQ(stability_probability_bound(in), 0.0);
}

TEST(ProbabilityBound, KeepsTailInformationPastRounding) {
  CertificateInput in = reference_input();
  in.M = 100000000;
  const ProbabilityBound pb = probability_bound(in);
  EXPECT_EQ(pb.probability, 1.0);
  EXPECT_NEAR(pb.log_one_minus_p, -156800.0, 1e-6);
}

TEST(ProbabilityBound, Monotonicity) {
  CertificateInput in = reference_input();
  in.M = 10;
  double prev = stability_probability_bound(in);
  for (int k = 0; k < 8; ++k) {
    in.M *= 2;
    const double p = stability_probability_bound(in);
    EXPECT_GT(p, prev);
    prev = p;
  }
  in = reference_input();
  in.M = 50;
  prev = 0.0;
  for (std::uint64_t T = 225; T < 200000; T *= 2) {
    in.T = T;
    const double p = stability_probability_bound(in);
    EXPECT_GE(p, prev);
    prev = p;
  }
  in = reference_input();
  in.M = 50;
  prev = 1.0;
  for (double c = 0.05; c < 2.0; c *= 1.5) {
    in.c_bar = c;
    const double p = stability_probability_bound(in);
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(CertificateInput, ValidatesInvariants) {
  CertificateInput in = reference_input();
  in.M = 0;
  EXPECT_THROW(in.validate(), InvalidParameterError);
  in = reference_input();
  in.gamma = 1.0;
  EXPECT_THROW(in.validate(), InvalidParameterError);
  in = reference_input();
  in.epsilon = 0.0;
  EXPECT_THROW(in.validate(), InvalidParameterError);
}

// Smallest M with bound >= delta, by bisection on the public bound.
std::uint64_t bisect_M(double delta, CertificateInput in) {
  std::uint64_t lo = 0, hi = 1;
  auto ok = [&](std::uint64_t M) {
    in.M = M;
    return stability_probability_bound(in) >= delta;
  };
  while (!ok(hi)) hi *= 2;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

TEST(RequiredM, InvertAndVerify) {
  const CertificateInput in = reference_input();
  for (double delta : {0.5, 0.9, 0.95, 0.99, 0.999999}) {
    const std::uint64_t M = required_M_for_confidence(delta, in.T, in.epsilon, in.alpha2, in.alpha3, in.c_bar,
                                                      in.gamma);
    EXPECT_EQ(M, bisect_M(delta, in)) << delta;
    CertificateInput at = in;
    at.M = M;
    EXPECT_GE(stability_probability_bound(at), delta);
    if (M > 1) {
      at.M = M - 1;
      EXPECT_LT(stability_probability_bound(at), delta);
    }
  }
}

TEST(RequiredM, TinyDeltaNeedsOne) {
  EXPECT_EQ(required_M_for_confidence(1e-12, 10000, 0.1, 1.0, 0.5, 1.0, 0.5), 1u);
}

TEST(RequiredM, DoublingMarginQuartersM) {
  // margins 0.07 and 0.14 at T = 10^4 (epsilon 0.1 and 0.17)
  const double m1 = static_cast<double>(required_M_for_confidence(1 - 1e-9, 10000, 0.1, 1.0, 0.5, 1.0, 0.5));
  const double m2 = static_cast<double>(required_M_for_confidence(1 - 1e-9, 10000, 0.17, 1.0, 0.5, 1.0, 0.5));
  EXPECT_NEAR(m1 / m2, 4.0, 0.01);
}

TEST(RequiredM, NonpositiveMarginIsInfeasible) {
  EXPECT_THROW(required_M_for_confidence(0.95, 100, 0.1, 1.0, 0.5, 1.0, 0.5), InfeasibleConfigError);
}

TEST(FiniteHorizonBias, Examples) {
  EXPECT_DOUBLE_EQ(finite_horizon_bias_bound(1.0, 0.5, 2.0, 0.5, 1), 6.0);
  EXPECT_NEAR(finite_horizon_bias_bound(1.0, 0.5, 2.0, 0.5, 10000), 0.06, 1e-15);
  double prev = 1e300;
  for (std::uint64_t T = 1; T < 100000; T *= 3) {
    const double v = finite_horizon_bias_bound(1.0, 0.5, 2.0, 0.3, T);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(HoeffdingTail, Examples) {
  EXPECT_EQ(hoeffding_tail_bound(10, 0.0, 1.0, 0.5, 1.0), 1.0);
  const double b2 = 2.5;
  EXPECT_NEAR(hoeffding_tail_bound(100, b2 / 10.0, 1.0, 0.5, 1.0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(std::exp(-2.0), 0.1353, 1e-4);
  EXPECT_GT(hoeffding_tail_bound(10, 0.1, 1.0, 0.5, 1.0), hoeffding_tail_bound(20, 0.1, 1.0, 0.5, 1.0));
  EXPECT_GT(hoeffding_tail_bound(10, 0.1, 1.0, 0.5, 1.0), hoeffding_tail_bound(10, 0.2, 1.0, 0.5, 1.0));
  EXPECT_THROW(hoeffding_tail_bound(10, -0.1, 1.0, 0.5, 1.0), InvalidParameterError);
}

LyapunovFn identity_lf(double sigma, double alpha3) { return LyapunovFn(DenseNet({1, 1}, {1.0, 0.0}), sigma, 1000.0, alpha3); }

TEST(EmpiricalDeltaL, AllZeroTrajectories) {
  const LyapunovFn lf(DenseNet({1, 3, 1}), 0.01, 1000.0, 0.005);
  const std::vector<Trajectory> trajs{make_trajectory({{0.0}, {0.0}, {0.0}}, {0, 0}, 1000.0)};
  EXPECT_EQ(empirical_delta_L_avg(trajs, lf), 0.0);
}

TEST(EmpiricalDeltaL, HandSubstitution) {
  // States (1, 0, 0), alpha3 = 1: ((L(0) - L(1) + 1) + 0) / 2 with L(1) = 1 + sigma.
  const LyapunovFn lf = identity_lf(0.01, 1.0);
  const std::vector<Trajectory> trajs{make_trajectory({{1.0}, {0.0}, {0.0}}, {0, 0}, 1000.0)};
  EXPECT_NEAR(empirical_delta_L_avg(trajs, lf), -0.005, 1e-15);
}

TEST(EmpiricalDeltaL, MatchesDoubleLoop) {
  RandomStream rng(31, 0);
  const LyapunovFn lf(DenseNet::initialized({2, 6, 1}, rng), 0.01, 1000.0, 0.005);
  std::vector<Trajectory> trajs;
  for (int m = 0; m < 2; ++m) {
    std::vector<State> states;
    std::vector<std::size_t> actions;
    for (int t = 0; t < 6; ++t) states.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
    actions.assign(5, 0);
    trajs.push_back(make_trajectory(states, actions, 1000.0));
  }
  double sum = 0.0;
  for (int t = 0; t < 5; ++t) {
    for (int m = 0; m < 2; ++m) {
      const State& s = trajs[m].states[t];
      const State& n = trajs[m].states[t + 1];
      sum += lf(n) - lf(s) + 0.005 * (s[0] * s[0] + s[1] * s[1]);
    }
  }
  EXPECT_NEAR(empirical_delta_L_avg(trajs, lf), sum / 10.0, 1e-12);
}

TEST(EmpiricalDeltaL, RaggedOrTruncatedDataRejected) {
  const LyapunovFn lf = identity_lf(0.01, 0.005);
  std::vector<Trajectory> ragged{make_trajectory({{1.0}, {0.5}, {0.2}}, {0, 0}, 1000.0),
                                 make_trajectory({{1.0}, {0.5}}, {0}, 1000.0)};
  EXPECT_THROW(empirical_delta_L_avg(ragged, lf), ProtocolError);
  Trajectory cut = make_trajectory({{1.0}, {0.5}}, {0}, 1000.0);
  cut.horizon = 5;
  EXPECT_THROW(empirical_delta_L_avg(std::vector<Trajectory>{cut}, lf), ProtocolError);
}

TEST(EvaluateCertificate, CertifiesWhenAllGatesPass) {
  const CertificateReport r = evaluate_certificate(reference_input());
  EXPECT_EQ(r.verdict, Verdict::certified);
  EXPECT_TRUE(r.decrease_condition_satisfied);
  EXPECT_TRUE(r.min_T_satisfied);
  EXPECT_TRUE(r.margin_positive);
  EXPECT_EQ(r.min_T, 225u);
  EXPECT_GT(r.probability_lower_bound, 0.0);
  EXPECT_EQ(to_string(r.verdict), "CERTIFIED");
}

TEST(EvaluateCertificate, DecreaseConditionGate) {
  CertificateInput in = reference_input();
  in.empirical_delta_L = -0.05;
  const CertificateReport r = evaluate_certificate(in);
  EXPECT_EQ(r.verdict, Verdict::not_certified);
  EXPECT_FALSE(r.decrease_condition_satisfied);
  EXPECT_NE(r.reason.find("decrease condition"), std::string::npos);
  in.M = 1000000000;
  EXPECT_EQ(evaluate_certificate(in).verdict, Verdict::not_certified);
}

TEST(EvaluateCertificate, MinTGate) {
  CertificateInput in = reference_input();
  in.T = 224;
  const CertificateReport r = evaluate_certificate(in);
  EXPECT_EQ(r.verdict, Verdict::not_certified);
  EXPECT_FALSE(r.min_T_satisfied);
  EXPECT_NE(r.reason.find("minimum trajectory length"), std::string::npos);
}

TEST(EvaluateCertificate, MarginGateIsIndependentOfMinT) {
  // T = 400 clears min T = 225 but 2 * 400^(-1/2) * 1.5 = 0.15 > epsilon.
  CertificateInput in = reference_input();
  in.T = 400;
  const CertificateReport r = evaluate_certificate(in);
  EXPECT_TRUE(r.min_T_satisfied);
  EXPECT_FALSE(r.margin_positive);
  EXPECT_EQ(r.verdict, Verdict::not_certified);
  EXPECT_EQ(r.probability_lower_bound, 0.0);
}

TEST(Certify, ViolatedDecreaseIsNotCertified) {
  // Growing states: L increases along every trajectory.
  const LyapunovFn lf = identity_lf(0.01, 0.005);
  std::vector<Trajectory> trajs;
  for (int m = 0; m < 5; ++m) trajs.push_back(make_trajectory({{0.1}, {0.2}, {0.4}, {0.8}}, {0, 0, 0}, 1000.0));
  const CertificateReport r = certify(trajs, lf, 0.5, 1e-4);
  EXPECT_EQ(r.verdict, Verdict::not_certified);
  EXPECT_FALSE(r.decrease_condition_satisfied);
  ASSERT_TRUE(r.sandwich.has_value());
  EXPECT_NEAR(r.input.alpha2, 1.01, 1e-12);
}

TEST(Certify, Deterministic) {
  const LyapunovFn lf = identity_lf(0.01, 0.005);
  std::vector<Trajectory> trajs;
  for (int m = 0; m < 3; ++m) trajs.push_back(make_trajectory({{1.0}, {0.5}, {0.25}}, {0, 0}, 1000.0));
  const CertificateReport a = certify(trajs, lf, 0.5, 1e-4);
  const CertificateReport b = certify(trajs, lf, 0.5, 1e-4);
  EXPECT_EQ(a.input.empirical_delta_L, b.input.empirical_delta_L);
  EXPECT_EQ(a.probability_lower_bound, b.probability_lower_bound);
  EXPECT_EQ(a.reason, b.reason);
}

TEST(BoundSurface, ZeroBelowMinTAndMonotone) {
  const auto Ms = integer_range(1, 1000, 20);
  const auto Ts = integer_range(1, 5000, 100);
  const auto grid = bound_surface(Ms, Ts, 0.1, 1.0, 0.5, 1.0, 0.5);
  ASSERT_EQ(grid.size(), Ms.size() * Ts.size());
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    for (std::size_t j = 0; j < Ts.size(); ++j) {
      const SurfacePoint& p = grid[i * Ts.size() + j];
      EXPECT_EQ(p.M, Ms[i]);
      EXPECT_EQ(p.T, Ts[j]);
      if (p.T < 225) EXPECT_EQ(p.probability, 0.0);
      if (i > 0) EXPECT_GE(p.probability, grid[(i - 1) * Ts.size() + j].probability);
      if (j > 0 && Ts[j - 1] >= 225) EXPECT_GE(p.probability, grid[i * Ts.size() + j - 1].probability);
    }
  }
}

TEST(BoundSurface, SharpRiseShape) {
  // 50 x 50 grid: flat zero region, then a rise to near 1 at large M and T.
  const auto Ms = integer_range(20, 1000, 20);
  const auto Ts = integer_range(100, 5000, 100);
  ASSERT_EQ(Ms.size(), 50u);
  ASSERT_EQ(Ts.size(), 50u);
  const auto grid = bound_surface(Ms, Ts, 0.1, 1.0, 0.5, 1.0, 0.5);
  EXPECT_EQ(grid.front().probability, 0.0);
  EXPECT_GT(grid.back().probability, 0.5);
}

TEST(BoundSurface, EmptyRangeThrows) {
  const std::vector<std::uint64_t> none;
  const std::vector<std::uint64_t> some{1, 2};
  EXPECT_THROW(bound_surface(none, some, 0.1, 1.0, 0.5, 1.0, 0.5), InvalidInputError);
  EXPECT_THROW(bound_surface(some, none, 0.1, 1.0, 0.5, 1.0, 0.5), InvalidInputError);
}

TEST(IntegerRange, Inclusive) {
  EXPECT_EQ(integer_range(1, 10, 3), (std::vector<std::uint64_t>{1, 4, 7, 10}));
  EXPECT_EQ(integer_range(5, 5, 1), (std::vector<std::uint64_t>{5}));
  EXPECT_TRUE(integer_range(6, 5, 1).empty());
}

}  // namespace
}  // namespace lrcert
