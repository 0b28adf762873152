#pragma once

namespace sedsim {

/// CODATA 2018 values in SI units.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;           // J s
  static constexpr double c = 299792458.0;                  // m / s
  static constexpr double epsilon0 = 8.8541878128e-12;      // F / m
  static constexpr double electron_charge = 1.602176634e-19;  // C
  static constexpr double electron_mass = 9.1093837015e-31;   // kg
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace sedsim
