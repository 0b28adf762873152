#include <cmath>
#include <numeric>
#include <random>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "sedsim/constants.hpp"
#include "sedsim/error.hpp"
#include "sedsim/rational.hpp"

namespace sedsim {
namespace {

TEST(Rationalize, RecoversSmallFractions) {
  for (std::int64_t q = 1; q <= 40; ++q) {
    for (std::int64_t p = 0; p <= 60; ++p) {
      const auto r = rationalize(static_cast<double>(p) / static_cast<double>(q));
      ASSERT_TRUE(r.has_value());
      const std::int64_t g = std::gcd(p, q);
      EXPECT_EQ(r->num, p / g);
      EXPECT_EQ(r->den, q / g);
    }
  }
}

TEST(Rationalize, IrrationalNeedsHugeDenominator) {
  EXPECT_FALSE(rationalize(std::sqrt(2.0)).has_value());
  EXPECT_FALSE(rationalize(kPi, 1e-15).has_value());
  // The first continued-fraction convergent inside each tolerance.
  const std::vector<std::tuple<double, std::int64_t, std::int64_t>> cases{
      {1e-3, 22, 7}, {1e-4, 333, 106}, {1e-7, 355, 113}, {1e-9, 103993, 33102},
      {1e-12, 1146408, 364913}};
  for (const auto& [tol, num, den] : cases) {
    const auto r = rationalize(kPi, tol);
    ASSERT_TRUE(r.has_value()) << tol;
    EXPECT_EQ(r->num, num) << tol;
    EXPECT_EQ(r->den, den) << tol;
  }
}

TEST(RepetitionTime, PeriodsOneAndAHalfAndTwo) {
  const std::vector<double> periods{1.5, 2.0};
  const auto t = repetition_time_from_periods(periods);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(*t, 6.0);
  const std::vector<double> omegas{2 * kPi / 1.5, 2 * kPi / 2.0};
  const auto t2 = repetition_time(omegas);
  ASSERT_TRUE(t2.has_value());
  EXPECT_NEAR(*t2, 6.0, 1e-12);
}

TEST(RepetitionTime, SingleFrequency) {
  const std::vector<double> w{3.7e15};
  EXPECT_NEAR(*repetition_time(w) / (2 * kPi / 3.7e15), 1.0, 1e-15);
}

TEST(RepetitionTime, IrrationalRatioIsEffectivelyInfinite) {
  const std::vector<double> w{1.0, std::sqrt(2.0)};
  EXPECT_FALSE(repetition_time(w).has_value());
  EXPECT_FALSE(repetition_time_from_periods(w).has_value());
}

TEST(RepetitionTime, InvalidInput) {
  EXPECT_THROW(repetition_time(std::vector<double>{}), InvalidParameter);
  EXPECT_THROW(repetition_time(std::vector<double>{1.0, 0.0}), InvalidParameter);
  EXPECT_THROW(repetition_time(std::vector<double>{1.0, -2.0}), InvalidParameter);
  EXPECT_THROW(repetition_time_from_periods(std::vector<double>{-1.0}), InvalidParameter);
}

// Integer multiples n_i of a base frequency repeat after 2 pi / (base gcd(n_i)).
TEST(RepetitionTime, IntegerLatticeProperty) {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<int> count(1, 8), mult(1, 400), scale(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    const double base = 1e13 * (1 + trial % 7);
    const int s = scale(gen);
    std::vector<double> w;
    std::int64_t g = 0;
    const int n = count(gen);
    for (int i = 0; i < n; ++i) {
      const std::int64_t k = static_cast<std::int64_t>(mult(gen)) * s;
      g = std::gcd(g, k);
      w.push_back(base * static_cast<double>(k));
    }
    const auto t = repetition_time(w);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t / (2 * kPi / (base * static_cast<double>(g))), 1.0, 1e-12);
    for (double wi : w) {
      const double turns = *t * wi / (2 * kPi);
      EXPECT_NEAR(turns, std::round(turns), 1e-9 * turns);
    }
  }
}

}  // namespace
}  // namespace sedsim
