#include <gtest/gtest.h>

#include <cmath>

#include "lrcert/environment.hpp"
#include "lrcert/errors.hpp"

namespace lrcert {
namespace {

TEST(ActionSet, RejectsEmptyAndDuplicates) {
  EXPECT_THROW(ActionSet(std::vector<Action>{}), InvalidInputError);
  EXPECT_THROW(ActionSet({{"a", 1.0}, {"a", 2.0}}), InvalidInputError);
  const ActionSet set({{"a", 1.0}, {"b", 2.0}});
  EXPECT_EQ(set.index_of("b"), 1u);
  EXPECT_THROW(set.index_of("c"), InvalidActionError);
}

TEST(EnvSpec, DefaultsAndLabels) {
  const EnvSpec cp{CartpoleSpec{}};
  EXPECT_EQ(cp.state_dim(), 4u);
  ASSERT_EQ(cp.actions().size(), 3u);
  EXPECT_EQ(cp.actions()[0].value, -10.0);
  EXPECT_EQ(cp.actions()[2].value, 10.0);
  const EnvSpec lin{LinearSpec{}};
  EXPECT_EQ(lin.state_dim(), 1u);
  EXPECT_EQ(lin.actions()[1].value, 0.0);
}

TEST(EnvSpec, RejectsBadParameters) {
  CartpoleSpec cp;
  cp.dt = 0.0;
  EXPECT_THROW(EnvSpec{cp}, InvalidParameterError);
  LinearSpec lin;
  lin.w_std = -0.1;
  EXPECT_THROW(EnvSpec{lin}, InvalidParameterError);
}

TEST(Reset, Deterministic) {
  const EnvSpec env{CartpoleSpec{}};
  RandomStream a(9, 3), b(9, 3);
  EXPECT_EQ(reset(env, a), reset(env, b));
}

TEST(Reset, CartpoleSupportAndMean) {
  const EnvSpec env{CartpoleSpec{}};
  RandomStream rng(1, 1);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const State s = reset(env, rng);
    ASSERT_LE(std::abs(s[0]), 1.0);
    ASSERT_LE(std::abs(s[1]), 0.05);
    ASSERT_LE(std::abs(s[2]), 0.05);
    ASSERT_LE(std::abs(s[3]), 0.05);
    sum += s[0];
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
}

TEST(Reset, LinearSupport) {
  const EnvSpec env{LinearSpec{}};
  RandomStream rng(1, 2);
  for (int i = 0; i < 1000; ++i) ASSERT_LE(std::abs(reset(env, rng)[0]), 1.0);
}

TEST(Step, CartpoleUprightEquilibrium) {
  const EnvSpec env{CartpoleSpec{}};
  RandomStream rng(0, 0);
  State s{0.3, 0.0, 0.0, 0.0};
  for (int t = 0; t < 1000; ++t) s = step(env, s, "F=0", rng);
  EXPECT_EQ(s, (State{0.3, 0.0, 0.0, 0.0}));
  EXPECT_EQ(rng.position(), 0u);
}

TEST(Step, CartpoleHandComputedEulerStep) {
  // One explicit Euler step of the classic cart-pole equations from
  // (0, 0, 0.1, 0) under F = +10, evaluated independently.
  const EnvSpec env{CartpoleSpec{}};
  RandomStream rng(0, 0);
  const State s = step(env, State{0.0, 0.0, 0.1, 0.0}, "F=10", rng);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_NEAR(s[1], 0.19355619172742766, 1e-15);
  EXPECT_EQ(s[2], 0.1);
  EXPECT_NEAR(s[3], -0.25953280098204656, 1e-15);
}

TEST(Step, LinearNoiseless) {
  LinearSpec spec;
  spec.w_std = 0.0;
  const EnvSpec env{spec};
  RandomStream rng(0, 0);
  EXPECT_DOUBLE_EQ(step(env, State{1.0}, "u=0", rng)[0], 0.9);
  EXPECT_DOUBLE_EQ(step(env, State{1.0}, "u=0.1", rng)[0], 1.0);
  EXPECT_EQ(rng.position(), 0u);
}

TEST(Step, UnknownActionAndShape) {
  const EnvSpec env{CartpoleSpec{}};
  RandomStream rng(0, 0);
  EXPECT_THROW(step(env, State{0, 0, 0, 0}, "F=5", rng), InvalidActionError);
  EXPECT_THROW(step(env, State{0, 0, 0, 0}, 3, rng), InvalidActionError);
  EXPECT_THROW(step(env, State{0, 0}, 0, rng), ShapeError);
}

TEST(Step, DivergenceCarriesState) {
  LinearSpec spec;
  spec.a = 1e300;
  spec.w_std = 0.0;
  const EnvSpec env{spec};
  RandomStream rng(0, 0);
  try {
    step(env, State{1e300}, 1, rng);
    FAIL() << "expected a divergence";
  } catch (const DivergenceError& e) {
    ASSERT_EQ(e.state().size(), 1u);
    EXPECT_FALSE(std::isfinite(e.state()[0]));
  }
}

TEST(Step, DeterministicGivenStreamPosition) {
  const EnvSpec env{LinearSpec{}};
  RandomStream a(4, 4), b(4, 4);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(step(env, State{0.5}, 2, a), step(env, State{0.5}, 2, b));
}

TEST(TrainingTerminated, Cases) {
  const EnvSpec env{CartpoleSpec{}};
  EXPECT_TRUE(training_terminated(env, State{0, 0, 0.36, 0}, 0));
  EXPECT_TRUE(training_terminated(env, State{0, 0, -0.36, 0}, 0));
  EXPECT_FALSE(training_terminated(env, State{0, 0, 0.0, 0}, 10));
  EXPECT_FALSE(training_terminated(env, State{0, 0, 0.35, 0}, 500));
  EXPECT_TRUE(training_terminated(env, State{0, 0, 0.0, 0}, 501));
  EXPECT_FALSE(training_terminated(env, State{0, 0, 1.0, 0}, 600, Mode::evaluation));
  EXPECT_FALSE(training_terminated(EnvSpec{LinearSpec{}}, State{100.0}, 10000));
}

TEST(LinearOracle, StationarySecondMoment) {
  // s' = 0.9 s + w has stationary E[s^2] = w_std^2 / (1 - a^2).
  const EnvSpec env{LinearSpec{}};
  RandomStream rng(12, 0);
  State s{0.0};
  for (int t = 0; t < 1000; ++t) s = step(env, s, "u=0", rng);
  double sq = 0.0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    s = step(env, s, "u=0", rng);
    sq += s[0] * s[0];
  }
  const double expected = 0.01 / (1.0 - 0.81);
  EXPECT_NEAR(sq / n, expected, 0.05 * expected);
}

TEST(CartpoleEnergy, RestingSystemStaysAtRest) {
  const EnvSpec env{CartpoleSpec{}};
  RandomStream rng(0, 0);
  State s{-0.7, 0.0, 0.0, 0.0};
  for (int t = 0; t < 500; ++t) {
    s = step(env, s, 1, rng);
    ASSERT_EQ(s[1], 0.0);
    ASSERT_EQ(s[3], 0.0);
  }
}

}  // namespace
}  // namespace lrcert
