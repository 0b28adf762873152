#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace sedsim {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

inline constexpr double kDefaultRationalTolerance = 1e-12;
inline constexpr std::int64_t kDefaultMaxDenominator = 1'000'000;

/// Continued-fraction approximation p/q of x >= 0 with |x - p/q| <= tolerance * x.
/// Returns nullopt when that accuracy needs a denominator above max_den.
std::optional<Rational> rationalize(double x, double tolerance = kDefaultRationalTolerance,
                                    std::int64_t max_den = kDefaultMaxDenominator);

/// Time after which a superposition of the given angular frequencies repeats,
/// 2 pi / gcd(omega_1, ..., omega_N) on the rational lattice spanned by the
/// ratios omega_i / omega_1. nullopt means "effectively infinite".
/// Throws InvalidParameter on an empty list or non-positive entries.
std::optional<double> repetition_time(std::span<const double> omegas,
                                      double tolerance = kDefaultRationalTolerance,
                                      std::int64_t max_den = kDefaultMaxDenominator);

/// Same, expressed through periods: the least common multiple of T_1, ..., T_N.
std::optional<double> repetition_time_from_periods(
    std::span<const double> periods, double tolerance = kDefaultRationalTolerance,
    std::int64_t max_den = kDefaultMaxDenominator);

}  // namespace sedsim
