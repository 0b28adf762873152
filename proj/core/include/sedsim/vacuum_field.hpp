#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "sedsim/params.hpp"

namespace sedsim {

using Vec3 = Eigen::Vector3d;

/// One sampled plane wave with its two polarization states.
struct Mode {
  Vec3 k = Vec3::Zero();                        // wave vector (rad/m)
  double omega = 0.0;                           // c |k|
  std::array<Vec3, 2> polarization{Vec3::Zero(), Vec3::Zero()};
  std::array<double, 2> phase{0.0, 0.0};        // one random phase per polarization
  double amplitude = 0.0;                       // sqrt(hbar omega / (eps0 V))
};

/// Immutable collection of modes on the resonance shell. The constructor
/// checks every invariant (triad orthonormality, band membership, amplitude
/// normalization) and throws InvalidParameter on violation.
class ModeSet {
 public:
  static constexpr double kTriadTolerance = 1e-12;

  ModeSet(std::vector<Mode> modes, double volume, double k_shell_volume, double omega0,
          double delta, std::uint64_t seed);

  std::span<const Mode> modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return modes_.size(); }
  bool empty() const noexcept { return modes_.empty(); }
  const Mode& operator[](std::size_t i) const { return modes_[i]; }

  double volume() const noexcept { return volume_; }
  double k_shell_volume() const noexcept { return k_shell_volume_; }
  double omega0() const noexcept { return omega0_; }
  double delta() const noexcept { return delta_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::vector<double> frequencies() const;

  friend bool operator==(const ModeSet& a, const ModeSet& b);

 private:
  std::vector<Mode> modes_;
  double volume_;
  double k_shell_volume_;
  double omega0_;
  double delta_;
  std::uint64_t seed_;
};

/// Volume of the k-space shell between (omega0 -/+ delta/2) / c.
double k_shell_volume(double omega0, double delta);

/// Normalization volume (2 pi)^3 N_k / V_k.
double normalization_volume(std::size_t mode_count, double shell_volume);

/// Field amplitude sqrt(hbar omega / (eps0 V)) of a single (k, lambda) mode.
double mode_amplitude(double omega, double volume);

/// Polarization pair for a wave vector along (theta, phi), rotated by chi about
/// that wave vector. The xy-plane basis (cos chi, sin chi, 0), (-sin chi, cos chi, 0)
/// is rotated about y by theta, then about z by phi, so eps1 x eps2 = k-hat.
std::pair<Vec3, Vec3> make_polarization(double theta, double phi, double chi);

/// Unit vector for polar angle theta and azimuth phi.
Vec3 direction(double theta, double phi);

/// Mode with wave number k_mag along (theta, phi), polarization angle chi and
/// the two polarization phases. Amplitude is left at zero; see assemble_mode_set.
Mode make_mode(double k_mag, double theta, double phi, double chi, double phase1, double phase2);

/// Wrap hand-built modes into a ModeSet: computes V_k for the band, the
/// normalization volume for modes.size() wave vectors, and every amplitude.
ModeSet assemble_mode_set(std::vector<Mode> modes, double omega0, double delta,
                          std::uint64_t seed = 0);

/// Uniform spherical grid in (kappa = k^3/3, cos theta, phi). All randomness
/// comes from substreams of cfg.seed.
ModeSet sample_modes_spherical(const OscillatorParams& params, const FieldConfig& cfg);

/// One random direction per frequency on a uniform kappa grid.
ModeSet sample_modes_single_angle(const OscillatorParams& params, const FieldConfig& cfg);

/// Dispatches on cfg.scheme.
ModeSet sample_modes(const OscillatorParams& params, const FieldConfig& cfg);

/// x-component of the dipole-approximated field at r = 0:
///   sum over modes and polarizations of A cos(omega t - phase) eps_x.
/// Straight summation in mode order; the reference definition.
double field_x_dipole(const ModeSet& modes, double t);

/// Analytic time derivative of field_x_dipole.
double field_x_derivative(const ModeSet& modes, double t);

/// Precomputed form of field_x_dipole: per mode, both polarizations are folded
/// into E = sum_j (a_j cos omega_j t + b_j sin omega_j t). Also exposes the
/// phasor form E = Re sum_j P_j exp(i omega_j t) with P_j = a_j - i b_j.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const ModeSet& modes);

  double operator()(double t) const noexcept;
  double derivative(double t) const noexcept;

  std::size_t size() const noexcept { return omega_.size(); }
  std::span<const double> omega() const noexcept { return omega_; }
  std::span<const double> cos_coeff() const noexcept { return cos_coeff_; }
  std::span<const double> sin_coeff() const noexcept { return sin_coeff_; }

  /// sum_j sqrt(a_j^2 + b_j^2): a bound on |E(t)|.
  double scale() const noexcept { return scale_; }

 private:
  std::vector<double> omega_;
  std::vector<double> cos_coeff_;
  std::vector<double> sin_coeff_;
  double scale_ = 0.0;
};

/// Derive windows directly from a mode set.
SimWindows derive_windows(const OscillatorParams& params, const ModeSet& modes);

void to_json(nlohmann::json& j, const ModeSet& modes);
ModeSet mode_set_from_json(const nlohmann::json& j);

}  // namespace sedsim
