#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "lrcert/errors.hpp"
#include "lrcert/text.hpp"

namespace lrcert {
namespace {

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1e-320}) {
    EXPECT_EQ(parse_double(format_double(v), "v"), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(ParseDouble, RejectsGarbage) {
  EXPECT_THROW(parse_double("1.5x", "value"), LoadError);
  EXPECT_THROW(parse_double("", "value"), LoadError);
  EXPECT_DOUBLE_EQ(parse_double(" 2.5 ", "value"), 2.5);
}

TEST(ParseInt, RejectsFractions) {
  EXPECT_EQ(parse_int("-12", "n"), -12);
  EXPECT_THROW(parse_int("1.0", "n"), LoadError);
}

TEST(Split, KeepsEmptyFields) {
  const auto parts = split("a,,b,", ',');
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[1], "");
  EXPECT_EQ(parts[3], "");
}

TEST(Fnv1a, KnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
}

}  // namespace
}  // namespace lrcert
