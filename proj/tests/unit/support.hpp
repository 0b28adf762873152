#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "sedsim/constants.hpp"
#include "sedsim/params.hpp"
#include "sedsim/vacuum_field.hpp"

namespace sedsim::test {

using C = PhysicalConstants;

// m = 1e-4 m_e, omega0 = 1e16 rad/s.
inline OscillatorParams paper_params() {
  return OscillatorParams::from_electron_units(1.0, 1e-4, 1e16);
}

inline FieldConfig paper_field(const OscillatorParams& p, unsigned n_omega, std::uint64_t seed = 1) {
  FieldConfig f;
  f.delta = 220.0 * p.damping_rate();
  f.n_omega = n_omega;
  f.seed = seed;
  return f;
}

inline double rms(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s / static_cast<double>(a.size()));
}

inline double rms_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

}  // namespace sedsim::test
