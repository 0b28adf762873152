#include "sedsim/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sedsim/constants.hpp"
#include "sedsim/error.hpp"

namespace sedsim {

using C = PhysicalConstants;

double derive_gamma(double charge, double mass) {
  if (!(mass > 0.0)) {
    throw InvalidParameter("mass must be positive, got " + std::to_string(mass));
  }
  return 2.0 * charge * charge / (3.0 * mass * C::c * C::c * C::c) / (4.0 * kPi * C::epsilon0);
}

OscillatorParams::OscillatorParams(double charge, double mass, double omega0,
                                   double sharpness_threshold)
    : charge_(charge), mass_(mass), omega0_(omega0), gamma_(0.0) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw InvalidParameter("omega0 must be positive and finite");
  }
  if (!std::isfinite(charge)) {
    throw InvalidParameter("charge must be finite");
  }
  gamma_ = derive_gamma(charge, mass);
  if (!(gamma_ * omega0_ < sharpness_threshold)) {
    throw InvalidParameter("sharp resonance violated: gamma*omega0 = " +
                           std::to_string(gamma_ * omega0_) + " >= " +
                           std::to_string(sharpness_threshold));
  }
}

OscillatorParams OscillatorParams::from_electron_units(double charge_multiple,
                                                       double mass_multiple, double omega0) {
  return OscillatorParams(charge_multiple * C::electron_charge, mass_multiple * C::electron_mass,
                          omega0);
}

double OscillatorParams::natural_period() const noexcept { return kTwoPi / omega0_; }

double OscillatorParams::sigma_x_target() const noexcept {
  return std::sqrt(C::hbar / (2.0 * mass_ * omega0_));
}

double OscillatorParams::sigma_p_target() const noexcept {
  return std::sqrt(C::hbar * mass_ * omega0_ / 2.0);
}

double OscillatorParams::ground_energy() const noexcept { return 0.5 * C::hbar * omega0_; }

std::size_t FieldConfig::mode_count() const noexcept {
  if (const auto* sph = std::get_if<UniformSphericalScheme>(&scheme)) {
    return std::size_t{sph->n_kappa} * sph->n_theta * sph->n_phi;
  }
  return n_omega;
}

void FieldConfig::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidParameter("field delta must be positive");
  }
  if (n_omega < 2) {
    throw InvalidParameter("n_omega must be at least 2");
  }
  if (const auto* sph = std::get_if<UniformSphericalScheme>(&scheme)) {
    if (sph->n_kappa != n_omega) {
      throw InvalidParameter("spherical grid n_kappa (" + std::to_string(sph->n_kappa) +
                             ") must equal n_omega (" + std::to_string(n_omega) + ")");
    }
  }
}

RegimeReport validate_regime(const OscillatorParams& params, const FieldConfig& cfg,
                             RegimeThresholds thresholds) {
  RegimeReport report;
  report.thresholds = thresholds;
  report.resonance_ratio = params.damping_rate() / cfg.delta;
  report.bandwidth_ratio = cfg.delta / params.omega0();
  report.resonance_covered = report.resonance_ratio < thresholds.max_resonance_ratio;
  report.narrow_band = report.bandwidth_ratio < thresholds.max_bandwidth_ratio;
  return report;
}

double min_frequency_gap(std::span<const double> frequencies) {
  std::vector<double> sorted(frequencies.begin(), frequencies.end());
  std::sort(sorted.begin(), sorted.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double d = sorted[i] - sorted[i - 1];
    if (d > 0.0) gap = std::min(gap, d);
  }
  if (!std::isfinite(gap)) {
    throw DegenerateSpectrum("need at least two distinct frequencies");
  }
  return gap;
}

SimWindows derive_windows(const OscillatorParams& params, std::span<const double> frequencies) {
  if (frequencies.empty()) {
    throw DegenerateSpectrum("empty mode set");
  }
  SimWindows w;
  w.tau_tran = params.transient_time();
  w.delta_omega_min = min_frequency_gap(frequencies);
  w.tau_int = kTwoPi / w.delta_omega_min;

  double max_detuning = 0.0;
  for (double omega : frequencies) {
    max_detuning = std::max(max_detuning, std::abs(omega - params.omega0()));
  }
  w.tau_coh = max_detuning > 0.0 ? kTwoPi / max_detuning
                                 : std::numeric_limits<double>::infinity();
  return w;
}

double frequency_gap_estimate(double omega0, double delta, unsigned n_kappa) {
  if (n_kappa < 2) throw GridDegeneracy("n_kappa must be at least 2");
  const double c3 = C::c * C::c * C::c;
  const double lo = omega0 - 0.5 * delta;
  const double hi = omega0 + 0.5 * delta;
  const double dkappa = (hi * hi * hi - lo * lo * lo) / (3.0 * c3 * (n_kappa - 1));
  const double kappa0 = omega0 * omega0 * omega0 / (3.0 * c3);
  return C::c * std::cbrt(3.0 * kappa0) / 3.0 * dkappa / kappa0;
}

}  // namespace sedsim
