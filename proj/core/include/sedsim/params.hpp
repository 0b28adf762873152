#pragma once

#include <cstdint>
#include <span>
#include <variant>

namespace sedsim {

/// Classical radiation damping constant 2e^2 / (3 m c^3 4 pi eps0), in seconds.
/// Throws InvalidParameter for non-positive mass.
double derive_gamma(double charge, double mass);

/// Charged harmonic oscillator. Immutable once built; the damping constant is
/// derived from charge and mass, and construction rejects parameter sets that
/// violate the sharp-resonance condition gamma * omega0 < threshold.
class OscillatorParams {
 public:
  static constexpr double kDefaultSharpnessThreshold = 0.2;

  OscillatorParams(double charge, double mass, double omega0,
                   double sharpness_threshold = kDefaultSharpnessThreshold);

  /// Charge in units of the elementary charge, mass in units of the electron mass.
  static OscillatorParams from_electron_units(double charge_multiple, double mass_multiple,
                                              double omega0);

  double charge() const noexcept { return charge_; }
  double mass() const noexcept { return mass_; }
  double omega0() const noexcept { return omega0_; }
  double gamma() const noexcept { return gamma_; }

  /// Velocity damping rate gamma * omega0^2 (1/s); also the resonance width.
  double damping_rate() const noexcept { return gamma_ * omega0_ * omega0_; }
  double natural_period() const noexcept;
  double transient_time() const noexcept { return 2.0 / damping_rate(); }

  /// Ground-state targets: sqrt(hbar / 2 m omega0), sqrt(hbar m omega0 / 2), hbar omega0 / 2.
  double sigma_x_target() const noexcept;
  double sigma_p_target() const noexcept;
  double ground_energy() const noexcept;

 private:
  double charge_;
  double mass_;
  double omega0_;
  double gamma_;
};

/// One random direction per sampled frequency.
struct SingleAngleScheme {};

/// Uniform (kappa, cos theta, phi) grid; n_kappa is the number of frequencies.
struct UniformSphericalScheme {
  unsigned n_kappa = 2;
  unsigned n_theta = 2;
  unsigned n_phi = 1;
  /// One azimuth offset for the whole grid instead of one per (kappa, theta) row.
  bool shared_phi_offset = false;
};

using SamplingScheme = std::variant<SingleAngleScheme, UniformSphericalScheme>;

struct FieldConfig {
  double delta = 0.0;     // sampled frequency range (rad/s)
  unsigned n_omega = 0;   // number of distinct sampled frequencies
  SamplingScheme scheme = SingleAngleScheme{};
  std::uint64_t seed = 1;

  /// Total number of wave vectors N_k.
  std::size_t mode_count() const noexcept;

  /// Throws InvalidParameter on delta <= 0, n_omega < 2, or a spherical grid
  /// whose n_kappa disagrees with n_omega.
  void validate() const;
};

struct RegimeThresholds {
  double max_resonance_ratio = 0.2;  // bound on gamma omega0^2 / delta
  double max_bandwidth_ratio = 0.2;  // bound on delta / omega0
};

struct RegimeReport {
  double resonance_ratio = 0.0;
  double bandwidth_ratio = 0.0;
  RegimeThresholds thresholds;
  bool resonance_covered = false;
  bool narrow_band = false;

  bool pass() const noexcept { return resonance_covered && narrow_band; }
};

RegimeReport validate_regime(const OscillatorParams& params, const FieldConfig& cfg,
                             RegimeThresholds thresholds = {});

struct SimWindows {
  double tau_tran = 0.0;
  double tau_coh = 0.0;
  double delta_omega_min = 0.0;
  double tau_int = 0.0;

  static constexpr double kDefaultSeparation = 10.0;

  /// True when tau_int >= min_ratio * tau_tran.
  bool separated(double min_ratio = kDefaultSeparation) const noexcept {
    return tau_int >= min_ratio * tau_tran;
  }
};

/// Windows from an explicit frequency list. delta_omega_min is the exact
/// minimum nonzero gap of the sorted frequencies.
SimWindows derive_windows(const OscillatorParams& params, std::span<const double> frequencies);

/// Smallest nonzero gap between sorted frequencies. Throws DegenerateSpectrum
/// when fewer than two distinct values exist.
double min_frequency_gap(std::span<const double> frequencies);

/// Closed-form gap estimate c (3 kappa0)^(1/3) dkappa / (3 kappa0) for a
/// uniform kappa grid centred on omega0. Diagnostic only.
double frequency_gap_estimate(double omega0, double delta, unsigned n_kappa);

}  // namespace sedsim
