#include "sedsim/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "sedsim/constants.hpp"
#include "sedsim/error.hpp"

namespace sedsim {

namespace {

__extension__ using Wide = __int128;

constexpr Wide kLatticeLimit = Wide{1} << 62;

void check_positive(std::span<const double> values) {
  if (values.empty()) throw InvalidParameter("need at least one frequency or period");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidParameter("frequencies and periods must be positive and finite");
    }
  }
}

// Frequencies need only lcm(den) and periods only lcm(num), so an lcm that
// outgrows the limit is flagged rather than failing the whole lattice.
struct Lattice {
  std::optional<Wide> num_lcm = 1;  // lcm of reduced numerators
  Wide num_gcd = 0;                 // gcd of reduced numerators
  std::optional<Wide> den_lcm = 1;
  Wide den_gcd = 0;
};

Wide gcd_wide(Wide a, Wide b) {
  while (b != 0) {
    const Wide r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// lcm with overflow guard; nullopt once the lattice grows past int64 range.
std::optional<Wide> lcm_wide(Wide a, Wide b) {
  const Wide l = a / gcd_wide(a, b) * b;
  if (l > kLatticeLimit) return std::nullopt;
  return l;
}

// Rationalize every ratio values[i] / values[0] and fold them into one lattice.
std::optional<Lattice> build_lattice(std::span<const double> values, double tolerance,
                                     std::int64_t max_den) {
  Lattice lat;
  for (double v : values) {
    const auto r = rationalize(v / values[0], tolerance, max_den);
    if (!r || r->num == 0) return std::nullopt;
    const Wide num = r->num, den = r->den;
    if (lat.num_lcm) lat.num_lcm = lcm_wide(*lat.num_lcm, num);
    if (lat.den_lcm) lat.den_lcm = lcm_wide(*lat.den_lcm, den);
    lat.num_gcd = gcd_wide(lat.num_gcd, num);
    lat.den_gcd = gcd_wide(lat.den_gcd, den);
  }
  return lat;
}

}  // namespace

std::optional<Rational> rationalize(double x, double tolerance, std::int64_t max_den) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidParameter("rationalize needs finite x >= 0");
  long double y = x;
  std::int64_t p_prev = 0, q_prev = 1;
  std::int64_t p = 1, q = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const long double a_ld = std::floor(y);
    if (a_ld > static_cast<long double>(std::numeric_limits<std::int64_t>::max() / 2)) break;
    const auto a = static_cast<std::int64_t>(a_ld);
    const Wide p_new = Wide{a} * p + p_prev;
    const Wide q_new = Wide{a} * q + q_prev;
    if (q_new > max_den || p_new > std::numeric_limits<std::int64_t>::max()) return std::nullopt;
    p_prev = p;
    q_prev = q;
    p = static_cast<std::int64_t>(p_new);
    q = static_cast<std::int64_t>(q_new);
    const long double approx = static_cast<long double>(p) / q;
    if (std::abs(approx - static_cast<long double>(x)) <= tolerance * x) {
      return Rational{p, q};
    }
    const long double frac = y - a_ld;
    if (frac == 0.0L) break;
    y = 1.0L / frac;
  }
  return std::nullopt;
}

std::optional<double> repetition_time(std::span<const double> omegas, double tolerance,
                                      std::int64_t max_den) {
  check_positive(omegas);
  const auto lat = build_lattice(omegas, tolerance, max_den);
  if (!lat || !lat->den_lcm) return std::nullopt;
  // gcd of p_i/q_i is gcd(p)/lcm(q), so the fundamental is omega_1 * gcd(p) / lcm(q).
  const double t1 = kTwoPi / omegas[0];
  return t1 * static_cast<double>(*lat->den_lcm) / static_cast<double>(lat->num_gcd);
}

std::optional<double> repetition_time_from_periods(std::span<const double> periods,
                                                   double tolerance, std::int64_t max_den) {
  check_positive(periods);
  const auto lat = build_lattice(periods, tolerance, max_den);
  if (!lat || !lat->num_lcm) return std::nullopt;
  // lcm of T_1 * p_i/q_i is T_1 * lcm(p) / gcd(q).
  return periods[0] * static_cast<double>(*lat->num_lcm) / static_cast<double>(lat->den_gcd);
}

}  // namespace sedsim
