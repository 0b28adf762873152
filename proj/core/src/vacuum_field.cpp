#include "sedsim/vacuum_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "sedsim/constants.hpp"
#include "sedsim/error.hpp"
#include "sedsim/rng.hpp"

namespace sedsim {

using C = PhysicalConstants;

namespace {

double reduce_phase(double phase) {
  double r = std::fmod(phase, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

void check_mode(const Mode& m, std::size_t index, double omega0, double delta) {
  const auto fail = [index](const std::string& what) {
    throw InvalidParameter("mode " + std::to_string(index) + ": " + what);
  };
  const double tol = ModeSet::kTriadTolerance;
  if (!(m.omega > 0.0) || !std::isfinite(m.omega)) fail("frequency must be positive");
  if (std::abs(m.omega - C::c * m.k.norm()) > tol * m.omega) fail("omega != c|k|");
  const double slack = tol * omega0;
  if (m.omega < omega0 - 0.5 * delta - slack || m.omega > omega0 + 0.5 * delta + slack) {
    fail("frequency outside [omega0 - delta/2, omega0 + delta/2]");
  }
  const Vec3 khat = m.k.normalized();
  const auto& [e1, e2] = m.polarization;
  if (std::abs(e1.norm() - 1.0) > tol || std::abs(e2.norm() - 1.0) > tol) {
    fail("polarization vectors must be unit length");
  }
  if (std::abs(e1.dot(khat)) > tol || std::abs(e2.dot(khat)) > tol) {
    fail("polarization not transverse to k");
  }
  if (std::abs(e1.dot(e2)) > tol) fail("polarization vectors not orthogonal");
  if (!std::isfinite(m.phase[0]) || !std::isfinite(m.phase[1])) fail("phase must be finite");
}

// Uniform grid in k^3 between the band edges, returned as |k| values.
std::vector<double> kappa_grid_wavenumbers(double omega0, double delta, unsigned n) {
  if (n < 2) throw GridDegeneracy("n_kappa must be at least 2");
  const double k_lo = (omega0 - 0.5 * delta) / C::c;
  const double k_hi = (omega0 + 0.5 * delta) / C::c;
  const double cube_lo = k_lo * k_lo * k_lo;
  const double cube_step = (k_hi * k_hi * k_hi - cube_lo) / (n - 1);
  std::vector<double> k(n);
  for (unsigned i = 0; i < n; ++i) {
    k[i] = std::cbrt(cube_lo + i * cube_step);
  }
  // Pin the band edges so that the end points carry no rounding from the cube root.
  k.front() = k_lo;
  k.back() = k_hi;
  return k;
}

ModeSet assemble(std::vector<Mode> modes, const OscillatorParams& params, double delta,
                 std::uint64_t seed) {
  return assemble_mode_set(std::move(modes), params.omega0(), delta, seed);
}

}  // namespace

Mode make_mode(double k_mag, double theta, double phi, double chi, double phase1,
               double phase2) {
  Mode m;
  m.k = k_mag * direction(theta, phi);
  m.omega = C::c * k_mag;
  auto [e1, e2] = make_polarization(theta, phi, chi);
  m.polarization = {e1, e2};
  m.phase = {phase1, phase2};
  return m;
}

ModeSet assemble_mode_set(std::vector<Mode> modes, double omega0, double delta,
                          std::uint64_t seed) {
  const double shell = k_shell_volume(omega0, delta);
  const double volume = normalization_volume(modes.size(), shell);
  for (auto& m : modes) m.amplitude = mode_amplitude(m.omega, volume);
  return ModeSet(std::move(modes), volume, shell, omega0, delta, seed);
}

ModeSet::ModeSet(std::vector<Mode> modes, double volume, double k_shell_volume, double omega0,
                 double delta, std::uint64_t seed)
    : modes_(std::move(modes)),
      volume_(volume),
      k_shell_volume_(k_shell_volume),
      omega0_(omega0),
      delta_(delta),
      seed_(seed) {
  if (!(omega0 > 0.0) || !(delta > 0.0)) {
    throw InvalidParameter("mode set needs positive omega0 and delta");
  }
  if (!(volume > 0.0) || !(k_shell_volume > 0.0)) {
    throw InvalidParameter("mode set needs positive volumes");
  }
  // An empty set is the zero field; its volume is arbitrary.
  const double expected = std::pow(kTwoPi, 3) * static_cast<double>(modes_.size());
  if (!modes_.empty() && std::abs(volume_ * k_shell_volume_ - expected) > kTriadTolerance * expected) {
    throw InvalidParameter("volume * V_k must equal (2 pi)^3 N_k");
  }
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    Mode& m = modes_[i];
    check_mode(m, i, omega0_, delta_);
    m.phase = {reduce_phase(m.phase[0]), reduce_phase(m.phase[1])};
    const double amp = mode_amplitude(m.omega, volume_);
    if (std::abs(m.amplitude - amp) > kTriadTolerance * amp) {
      throw InvalidParameter("mode " + std::to_string(i) +
                             ": amplitude must equal sqrt(hbar omega / eps0 V)");
    }
  }
}

std::vector<double> ModeSet::frequencies() const {
  std::vector<double> out;
  out.reserve(modes_.size());
  for (const auto& m : modes_) out.push_back(m.omega);
  return out;
}

bool operator==(const ModeSet& a, const ModeSet& b) {
  if (a.volume_ != b.volume_ || a.k_shell_volume_ != b.k_shell_volume_ ||
      a.omega0_ != b.omega0_ || a.delta_ != b.delta_ || a.seed_ != b.seed_ ||
      a.modes_.size() != b.modes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.modes_.size(); ++i) {
    const Mode& x = a.modes_[i];
    const Mode& y = b.modes_[i];
    if (x.k != y.k || x.omega != y.omega || x.polarization[0] != y.polarization[0] ||
        x.polarization[1] != y.polarization[1] || x.phase != y.phase ||
        x.amplitude != y.amplitude) {
      return false;
    }
  }
  return true;
}

double k_shell_volume(double omega0, double delta) {
  const double k_hi = (omega0 + 0.5 * delta) / C::c;
  const double k_lo = (omega0 - 0.5 * delta) / C::c;
  return 4.0 * kPi / 3.0 * (k_hi * k_hi * k_hi - k_lo * k_lo * k_lo);
}

double normalization_volume(std::size_t mode_count, double shell_volume) {
  return std::pow(kTwoPi, 3) * static_cast<double>(mode_count) / shell_volume;
}

double mode_amplitude(double omega, double volume) {
  return std::sqrt(C::hbar * omega / (C::epsilon0 * volume));
}

Vec3 direction(double theta, double phi) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

std::pair<Vec3, Vec3> make_polarization(double theta, double phi, double chi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double cc = std::cos(chi), sc = std::sin(chi);
  Vec3 e1{ct * cp * cc - sp * sc, ct * sp * cc + cp * sc, -st * cc};
  Vec3 e2{-ct * cp * sc - sp * cc, -ct * sp * sc + cp * cc, st * sc};
  return {e1, e2};
}

ModeSet sample_modes_spherical(const OscillatorParams& params, const FieldConfig& cfg) {
  cfg.validate();
  const auto* grid = std::get_if<UniformSphericalScheme>(&cfg.scheme);
  if (grid == nullptr) {
    throw InvalidParameter("sample_modes_spherical needs a UniformSphericalScheme");
  }
  if (grid->n_kappa < 2) throw GridDegeneracy("n_kappa must be at least 2");
  if (grid->n_theta < 2) throw GridDegeneracy("n_theta must be at least 2");
  if (grid->n_phi < 1) throw GridDegeneracy("n_phi must be at least 1");

  const auto k = kappa_grid_wavenumbers(params.omega0(), cfg.delta, grid->n_kappa);
  const double dvartheta = 2.0 / (grid->n_theta - 1);
  const double dphi = kTwoPi / grid->n_phi;

  auto offsets = rng::substream(cfg.seed, rng::Purpose::kPhiOffset);
  auto chis = rng::substream(cfg.seed, rng::Purpose::kChi);
  auto phases = rng::substream(cfg.seed, rng::Purpose::kPhase);
  const double shared_offset = offsets.uniform(0.0, kTwoPi);

  std::vector<Mode> modes;
  modes.reserve(cfg.mode_count());
  for (unsigned i = 0; i < grid->n_kappa; ++i) {
    for (unsigned j = 0; j < grid->n_theta; ++j) {
      const double vartheta = std::clamp(-1.0 + j * dvartheta, -1.0, 1.0);
      const double theta = std::acos(vartheta);
      const double offset =
          grid->shared_phi_offset ? shared_offset : offsets.uniform(0.0, kTwoPi);
      for (unsigned n = 0; n < grid->n_phi; ++n) {
        const double phi = offset + n * dphi;
        const double chi = chis.uniform(0.0, kTwoPi);
        const double p1 = phases.uniform(0.0, kTwoPi);
        const double p2 = phases.uniform(0.0, kTwoPi);
        modes.push_back(make_mode(k[i], theta, phi, chi, p1, p2));
      }
    }
  }
  return assemble(std::move(modes), params, cfg.delta, cfg.seed);
}

ModeSet sample_modes_single_angle(const OscillatorParams& params, const FieldConfig& cfg) {
  cfg.validate();
  const auto k = kappa_grid_wavenumbers(params.omega0(), cfg.delta, cfg.n_omega);

  auto cos_thetas = rng::substream(cfg.seed, rng::Purpose::kCosTheta);
  auto phis = rng::substream(cfg.seed, rng::Purpose::kPhi);
  auto chis = rng::substream(cfg.seed, rng::Purpose::kChi);
  auto phases = rng::substream(cfg.seed, rng::Purpose::kPhase);

  std::vector<Mode> modes;
  modes.reserve(cfg.n_omega);
  for (unsigned i = 0; i < cfg.n_omega; ++i) {
    const double theta = std::acos(cos_thetas.uniform(-1.0, 1.0));
    const double phi = phis.uniform(0.0, kTwoPi);
    const double chi = chis.uniform(0.0, kTwoPi);
    const double p1 = phases.uniform(0.0, kTwoPi);
    const double p2 = phases.uniform(0.0, kTwoPi);
    modes.push_back(make_mode(k[i], theta, phi, chi, p1, p2));
  }
  return assemble(std::move(modes), params, cfg.delta, cfg.seed);
}

ModeSet sample_modes(const OscillatorParams& params, const FieldConfig& cfg) {
  if (std::holds_alternative<UniformSphericalScheme>(cfg.scheme)) {
    return sample_modes_spherical(params, cfg);
  }
  return sample_modes_single_angle(params, cfg);
}

double field_x_dipole(const ModeSet& modes, double t) {
  double sum = 0.0;
  for (const auto& m : modes.modes()) {
    for (int lambda = 0; lambda < 2; ++lambda) {
      sum += m.amplitude * std::cos(m.omega * t - m.phase[lambda]) * m.polarization[lambda].x();
    }
  }
  return sum;
}

double field_x_derivative(const ModeSet& modes, double t) {
  double sum = 0.0;
  for (const auto& m : modes.modes()) {
    for (int lambda = 0; lambda < 2; ++lambda) {
      sum -= m.amplitude * m.omega * std::sin(m.omega * t - m.phase[lambda]) *
             m.polarization[lambda].x();
    }
  }
  return sum;
}

FieldEvaluator::FieldEvaluator(const ModeSet& modes) {
  const std::size_t n = modes.size();
  omega_.reserve(n);
  cos_coeff_.reserve(n);
  sin_coeff_.reserve(n);
  for (const auto& m : modes.modes()) {
    double a = 0.0, b = 0.0;
    for (int lambda = 0; lambda < 2; ++lambda) {
      const double w = m.amplitude * m.polarization[lambda].x();
      a += w * std::cos(m.phase[lambda]);
      b += w * std::sin(m.phase[lambda]);
    }
    omega_.push_back(m.omega);
    cos_coeff_.push_back(a);
    sin_coeff_.push_back(b);
    scale_ += std::hypot(a, b);
  }
}

double FieldEvaluator::operator()(double t) const noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < omega_.size(); ++j) {
    const double arg = omega_[j] * t;
    sum += cos_coeff_[j] * std::cos(arg) + sin_coeff_[j] * std::sin(arg);
  }
  return sum;
}

double FieldEvaluator::derivative(double t) const noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < omega_.size(); ++j) {
    const double arg = omega_[j] * t;
    sum += omega_[j] * (sin_coeff_[j] * std::cos(arg) - cos_coeff_[j] * std::sin(arg));
  }
  return sum;
}

SimWindows derive_windows(const OscillatorParams& params, const ModeSet& modes) {
  const auto freqs = modes.frequencies();
  return derive_windows(params, std::span<const double>(freqs));
}

void to_json(nlohmann::json& j, const ModeSet& modes) {
  auto vec = [](const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); };
  nlohmann::json k = nlohmann::json::array(), omega = nlohmann::json::array(),
                 eps1 = nlohmann::json::array(), eps2 = nlohmann::json::array(),
                 phases = nlohmann::json::array();
  for (const auto& m : modes.modes()) {
    k.push_back(vec(m.k));
    omega.push_back(m.omega);
    eps1.push_back(vec(m.polarization[0]));
    eps2.push_back(vec(m.polarization[1]));
    phases.push_back({m.phase[0], m.phase[1]});
  }
  j = nlohmann::json{{"schema", "sedsim.modeset/1"},
                     {"omega0", modes.omega0()},
                     {"delta", modes.delta()},
                     {"volume", modes.volume()},
                     {"k_shell_volume", modes.k_shell_volume()},
                     {"seed", modes.seed()},
                     {"k", std::move(k)},
                     {"omega", std::move(omega)},
                     {"eps1", std::move(eps1)},
                     {"eps2", std::move(eps2)},
                     {"phases", std::move(phases)}};
}

ModeSet mode_set_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != "sedsim.modeset/1") {
      throw InvalidParameter("unsupported mode set schema");
    }
    auto vec = [](const nlohmann::json& a) {
      return Vec3(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>());
    };
    const auto& k = j.at("k");
    const auto& omega = j.at("omega");
    const auto& eps1 = j.at("eps1");
    const auto& eps2 = j.at("eps2");
    const auto& phases = j.at("phases");
    const std::size_t n = k.size();
    if (omega.size() != n || eps1.size() != n || eps2.size() != n || phases.size() != n) {
      throw InvalidParameter("mode set arrays have mismatched lengths");
    }
    const double volume = j.at("volume").get<double>();
    std::vector<Mode> modes(n);
    for (std::size_t i = 0; i < n; ++i) {
      Mode& m = modes[i];
      m.k = vec(k[i]);
      m.omega = omega[i].get<double>();
      m.polarization = {vec(eps1[i]), vec(eps2[i])};
      m.phase = {phases[i].at(0).get<double>(), phases[i].at(1).get<double>()};
      m.amplitude = mode_amplitude(m.omega, volume);
    }
    return ModeSet(std::move(modes), volume, j.at("k_shell_volume").get<double>(),
                   j.at("omega0").get<double>(), j.at("delta").get<double>(),
                   j.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed mode set JSON: ") + e.what());
  }
}

}  // namespace sedsim
