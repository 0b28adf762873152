#include "sedsim/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "sedsim/constants.hpp"
#include "sedsim/error.hpp"

namespace sedsim {

namespace {

// Cash-Karp tableau.
constexpr std::array<double, 6> kC{0.0, 1.0 / 5.0, 3.0 / 10.0, 3.0 / 5.0, 1.0, 7.0 / 8.0};
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 3.0 / 10.0, a42 = -9.0 / 10.0, a43 = 6.0 / 5.0;
constexpr double a51 = -11.0 / 54.0, a52 = 5.0 / 2.0, a53 = -70.0 / 27.0, a54 = 35.0 / 27.0;
constexpr double a61 = 1631.0 / 55296.0, a62 = 175.0 / 512.0, a63 = 575.0 / 13824.0,
                 a64 = 44275.0 / 110592.0, a65 = 253.0 / 4096.0;
constexpr std::array<double, 6> kB5{37.0 / 378.0, 0.0, 250.0 / 621.0,
                                    125.0 / 594.0, 0.0, 512.0 / 1771.0};
constexpr std::array<double, 6> kB4{2825.0 / 27648.0, 0.0, 18575.0 / 48384.0,
                                    13525.0 / 55296.0, 277.0 / 14336.0, 1.0 / 4.0};

constexpr double kSafety = 0.9;
constexpr double kMaxGrowth = 5.0;
constexpr double kMaxShrink = 0.1;
constexpr double kUnderflowFraction = 1e-6;
// Relative mismatch below which a step size reuses a cached rotor set.
constexpr double kRotorMatch = 1e-12;

constexpr unsigned kStages = 6;
constexpr unsigned kLanes = 4;

}  // namespace

IntegratorConfig IntegratorConfig::for_params(const OscillatorParams& params) {
  IntegratorConfig cfg;
  cfg.max_step = params.natural_period() / 20.0;
  cfg.initial_step = cfg.max_step;
  cfg.rel_tol = 1e-5;
  cfg.abs_tol_x = 1e-5 * params.sigma_x_target();
  cfg.abs_tol_v = cfg.abs_tol_x * params.omega0();
  return cfg;
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol_x > 0.0) || !(abs_tol_v > 0.0)) {
    throw InvalidParameter("integrator tolerances must be positive");
  }
  if (!(initial_step > 0.0) || !(initial_step <= max_step) || !std::isfinite(max_step)) {
    throw InvalidParameter("integrator needs 0 < initial_step <= max_step");
  }
}

void Trajectory::append(double t, double x, double v) {
  if (!std::isfinite(t) || !std::isfinite(x) || !std::isfinite(v)) {
    throw DivergenceError("non-finite trajectory sample at t = " + std::to_string(t));
  }
  if (!t_.empty() && !(t > t_.back())) {
    throw InvalidParameter("trajectory times must be strictly increasing");
  }
  t_.push_back(t);
  x_.push_back(x);
  v_.push_back(v);
}

void Trajectory::reserve(std::size_t n) {
  t_.reserve(n);
  x_.reserve(n);
  v_.reserve(n);
}

double acceleration(double x, double v, double t, const OscillatorParams& params,
                    const ModeSet& modes, bool damping_enabled) {
  const double w2 = params.omega0() * params.omega0();
  double a = -w2 * x;
  if (damping_enabled) a -= params.damping_rate() * v;
  if (params.charge() != 0.0 && !modes.empty()) {
    a += params.charge() / params.mass() * field_x_dipole(modes, t);
  }
  return a;
}

Integrator::Integrator(const OscillatorParams& params, const ModeSet& modes, IntegratorConfig cfg,
                       bool damping_enabled)
    : params_(params),
      cfg_(cfg),
      rate_(damping_enabled ? params.damping_rate() : 0.0),
      omega0_sq_(params.omega0() * params.omega0()),
      charge_over_mass_(params.charge() / params.mass()) {
  cfg_.validate();
  const FieldEvaluator field(modes);
  const auto w = field.omega();
  omega_.assign(w.begin(), w.end());
  const auto a = field.cos_coeff();
  const auto b = field.sin_coeff();
  p_re_.assign(a.begin(), a.end());
  p_im_.resize(b.size());
  std::transform(b.begin(), b.end(), p_im_.begin(), [](double x) { return -x; });
  q_re_.resize(omega_.size());
  q_im_.resize(omega_.size());
  fill_rotors(max_cache_, cfg_.max_step);
  reset(0.0, 0.0, 0.0);
}

void Integrator::reset(double t0, double x0, double v0) {
  state_ = {t0, x0, v0};
  h_next_ = cfg_.initial_step;
  stats_ = {};
  resync();
}

void Integrator::resync() {
  for (std::size_t j = 0; j < omega_.size(); ++j) {
    const double arg = omega_[j] * state_.t;
    const double c = std::cos(arg), s = std::sin(arg);
    q_re_[j] = p_re_[j] * c - p_im_[j] * s;
    q_im_[j] = p_re_[j] * s + p_im_[j] * c;
  }
  since_resync_ = 0;
}

void Integrator::fill_rotors(RotorCache& cache, double h) const {
  const std::size_t n = omega_.size();
  cache.h = h;
  cache.re.resize((kStages - 1) * n);
  cache.im.resize((kStages - 1) * n);
  for (unsigned s = 1; s < kStages; ++s) {
    double* re = cache.re.data() + (s - 1) * n;
    double* im = cache.im.data() + (s - 1) * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double arg = omega_[j] * kC[s] * h;
      re[j] = std::cos(arg);
      im[j] = std::sin(arg);
    }
  }
}

const Integrator::RotorCache& Integrator::rotors_for(double h) {
  if (std::abs(h - max_cache_.h) <= kRotorMatch * max_cache_.h) return max_cache_;
  if (std::abs(h - scratch_cache_.h) <= kRotorMatch * h) return scratch_cache_;
  fill_rotors(scratch_cache_, h);
  return scratch_cache_;
}

void Integrator::stage_fields(const RotorCache& rotors, double* out) const {
  const std::size_t n = omega_.size();
  // Fixed lane split keeps the summation order, and hence the result, reproducible.
  std::array<std::array<double, kLanes>, kStages> acc{};
  const std::size_t bulk = n - n % kLanes;
  const double* qr = q_re_.data();
  const double* qi = q_im_.data();
  for (std::size_t j = 0; j < bulk; j += kLanes) {
    for (unsigned l = 0; l < kLanes; ++l) acc[0][l] += qr[j + l];
  }
  for (unsigned s = 1; s < kStages; ++s) {
    const double* rr = rotors.re.data() + (s - 1) * n;
    const double* ri = rotors.im.data() + (s - 1) * n;
    auto& lane = acc[s];
    for (std::size_t j = 0; j < bulk; j += kLanes) {
      for (unsigned l = 0; l < kLanes; ++l) {
        lane[l] += qr[j + l] * rr[j + l] - qi[j + l] * ri[j + l];
      }
    }
  }
  for (unsigned s = 0; s < kStages; ++s) {
    double tail = 0.0;
    for (std::size_t j = bulk; j < n; ++j) {
      if (s == 0) {
        tail += qr[j];
      } else {
        const std::size_t k = (s - 1) * n + j;
        tail += qr[j] * rotors.re[k] - qi[j] * rotors.im[k];
      }
    }
    out[s] = charge_over_mass_ * ((acc[s][0] + acc[s][1]) + (acc[s][2] + acc[s][3]) + tail);
  }
}

void Integrator::rotate_phasors(const RotorCache& rotors) {
  const std::size_t n = omega_.size();
  // Stage 4 has c = 1, i.e. the rotor for the full step.
  const double* rr = rotors.re.data() + 3 * n;
  const double* ri = rotors.im.data() + 3 * n;
  for (std::size_t j = 0; j < n; ++j) {
    const double re = q_re_[j] * rr[j] - q_im_[j] * ri[j];
    const double im = q_re_[j] * ri[j] + q_im_[j] * rr[j];
    q_re_[j] = re;
    q_im_[j] = im;
  }
}

bool Integrator::try_step(double h, double& err_norm, State& next) {
  const RotorCache& rotors = rotors_for(h);
  std::array<double, kStages> drive{};
  if (omega_.empty() || charge_over_mass_ == 0.0) {
    drive.fill(0.0);
  } else {
    stage_fields(rotors, drive.data());
  }

  const double x = state_.x, v = state_.v;
  auto acc = [&](unsigned s, double xs, double vs) {
    return -omega0_sq_ * xs - rate_ * vs + drive[s];
  };
  std::array<double, kStages> kx{}, kv{};
  kx[0] = v;
  kv[0] = acc(0, x, v);
  double xs = x + h * a21 * kx[0];
  double vs = v + h * a21 * kv[0];
  kx[1] = vs;
  kv[1] = acc(1, xs, vs);
  xs = x + h * (a31 * kx[0] + a32 * kx[1]);
  vs = v + h * (a31 * kv[0] + a32 * kv[1]);
  kx[2] = vs;
  kv[2] = acc(2, xs, vs);
  xs = x + h * (a41 * kx[0] + a42 * kx[1] + a43 * kx[2]);
  vs = v + h * (a41 * kv[0] + a42 * kv[1] + a43 * kv[2]);
  kx[3] = vs;
  kv[3] = acc(3, xs, vs);
  xs = x + h * (a51 * kx[0] + a52 * kx[1] + a53 * kx[2] + a54 * kx[3]);
  vs = v + h * (a51 * kv[0] + a52 * kv[1] + a53 * kv[2] + a54 * kv[3]);
  kx[4] = vs;
  kv[4] = acc(4, xs, vs);
  xs = x + h * (a61 * kx[0] + a62 * kx[1] + a63 * kx[2] + a64 * kx[3] + a65 * kx[4]);
  vs = v + h * (a61 * kv[0] + a62 * kv[1] + a63 * kv[2] + a64 * kv[3] + a65 * kv[4]);
  kx[5] = vs;
  kv[5] = acc(5, xs, vs);

  double dx5 = 0.0, dv5 = 0.0, ex = 0.0, ev = 0.0;
  for (unsigned s = 0; s < kStages; ++s) {
    dx5 += kB5[s] * kx[s];
    dv5 += kB5[s] * kv[s];
    ex += (kB5[s] - kB4[s]) * kx[s];
    ev += (kB5[s] - kB4[s]) * kv[s];
  }
  next.t = state_.t + h;
  next.x = x + h * dx5;
  next.v = v + h * dv5;
  if (!std::isfinite(next.x) || !std::isfinite(next.v)) {
    throw DivergenceError("integrator state became non-finite at t = " +
                          std::to_string(state_.t));
  }
  const double sx = cfg_.abs_tol_x + cfg_.rel_tol * std::max(std::abs(x), std::abs(next.x));
  const double sv = cfg_.abs_tol_v + cfg_.rel_tol * std::max(std::abs(v), std::abs(next.v));
  err_norm = std::max(std::abs(h * ex) / sx, std::abs(h * ev) / sv);
  if (err_norm <= 1.0) {
    rotate_phasors(rotors);
    return true;
  }
  return false;
}

void Integrator::advance_to(double t1, const Observer& on_step) {
  if (t1 < state_.t) throw InvalidParameter("advance_to cannot go backwards in time");
  const double snap = 1e-12 * cfg_.max_step;
  while (t1 - state_.t > snap) {
    const double remaining = t1 - state_.t;
    const bool clamped = h_next_ >= remaining;
    double h = clamped ? remaining : h_next_;
    for (;;) {
      double err = 0.0;
      State next;
      if (try_step(h, err, next)) {
        if (clamped && h == remaining) next.t = t1;
        state_ = next;
        ++stats_.accepted;
        stats_.smallest_step = stats_.accepted == 1 ? h : std::min(stats_.smallest_step, h);
        stats_.largest_step = std::max(stats_.largest_step, h);
        const double grow = err > 0.0 ? std::min(kMaxGrowth, kSafety * std::pow(err, -0.2))
                                      : kMaxGrowth;
        const double proposal = std::min(cfg_.max_step, h * grow);
        h_next_ = clamped ? std::min(cfg_.max_step, std::max(h_next_, proposal)) : proposal;
        if (++since_resync_ >= kResyncInterval) resync();
        if (on_step) on_step(state_);
        break;
      }
      ++stats_.rejected;
      h *= std::max(kMaxShrink, kSafety * std::pow(err, -0.25));
      if (h < kUnderflowFraction * cfg_.initial_step) {
        throw StiffnessError("step size underflow at t = " + std::to_string(state_.t));
      }
      h_next_ = h;
    }
  }
  if (state_.t != t1) {
    state_.t = t1;
    resync();
  }
}

Trajectory integrate(const OscillatorParams& params, const ModeSet& modes, double t0, double t1,
                     double x0, double v0, const IntegratorConfig& cfg, unsigned record_stride,
                     bool damping_enabled) {
  if (!(t1 > t0)) throw InvalidParameter("integrate needs t1 > t0");
  if (record_stride == 0) throw InvalidParameter("record_stride must be at least 1");
  Integrator integrator(params, modes, cfg, damping_enabled);
  integrator.reset(t0, x0, v0);

  const double dt = cfg.max_step;
  const auto steps = static_cast<std::uint64_t>(std::floor((t1 - t0) / dt));
  Trajectory traj(params, damping_enabled);
  traj.reserve(steps / record_stride + 2);
  traj.append(t0, x0, v0);
  for (std::uint64_t k = 1; k <= steps; ++k) {
    const double target = t0 + static_cast<double>(k) * dt;
    if (target >= t1) break;
    integrator.advance_to(target);
    if (k % record_stride == 0) {
      const State& s = integrator.state();
      traj.append(s.t, s.x, s.v);
    }
  }
  integrator.advance_to(t1);
  const State& s = integrator.state();
  if (s.t > traj.times().back()) traj.append(s.t, s.x, s.v);
  traj.stats = integrator.stats();
  return traj;
}

SteadyState::SteadyState(const OscillatorParams& params, const ModeSet& modes) {
  const FieldEvaluator field(modes);
  const double qm = params.charge() / params.mass();
  const double w0sq = params.omega0() * params.omega0();
  const double rate = params.damping_rate();
  omega_.assign(field.omega().begin(), field.omega().end());
  response_.reserve(omega_.size());
  for (std::size_t j = 0; j < omega_.size(); ++j) {
    const double w = omega_[j];
    const std::complex<double> forcing(field.cos_coeff()[j], field.sin_coeff()[j]);
    const std::complex<double> denom(w0sq - w * w, -rate * w);
    response_.push_back(qm * forcing / denom);
  }
}

State SteadyState::operator()(double t) const {
  double x = 0.0, v = 0.0;
  for (std::size_t j = 0; j < omega_.size(); ++j) {
    const double arg = omega_[j] * t;
    const std::complex<double> rot(std::cos(arg), -std::sin(arg));
    const std::complex<double> z = response_[j] * rot;
    x += z.real();
    // d/dt of X exp(-i w t) is -i w X exp(-i w t), whose real part is w Im(z).
    v += omega_[j] * z.imag();
  }
  return {t, x, v};
}

State analytic_steady_state(const ModeSet& modes, const OscillatorParams& params, double t) {
  return SteadyState(params, modes)(t);
}

GreensResult greens_convolution(const ModeSet& modes, const OscillatorParams& params, double t,
                                double history_span) {
  if (!(history_span > 0.0)) throw InvalidParameter("history_span must be positive");
  GreensResult result;
  const double qm = params.charge() / params.mass();
  if (qm == 0.0 || modes.empty()) return result;

  const double rate = params.damping_rate();
  const double half_width = 0.5 * params.gamma() * params.omega0();
  const double omega_r = params.omega0() * std::sqrt(1.0 - half_width * half_width);
  const FieldEvaluator field(modes);

  auto panels = static_cast<std::uint64_t>(std::ceil(history_span / (params.natural_period() / 40.0)));
  panels += panels % 2;
  const double h = history_span / static_cast<double>(panels);
  auto integrand = [&](double s) {
    return field(t - s) * std::exp(-0.5 * rate * s) * std::sin(omega_r * s);
  };
  double odd = 0.0, even = 0.0;
  for (std::uint64_t i = 1; i < panels; ++i) {
    const double f = integrand(static_cast<double>(i) * h);
    (i % 2 == 1 ? odd : even) += f;
  }
  const double sum = integrand(0.0) + 4.0 * odd + 2.0 * even + integrand(history_span);
  result.value = qm / omega_r * sum * h / 3.0;
  result.truncated = history_span < 10.0 * params.transient_time();
  result.tail_bound = std::abs(qm) / omega_r * field.scale() * (2.0 / rate) *
                      std::exp(-0.5 * rate * history_span);
  return result;
}

double integration_window(const ModeSet& modes) {
  const auto freqs = modes.frequencies();
  return kTwoPi / min_frequency_gap(freqs);
}

}  // namespace sedsim
