#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sedsim/params.hpp"
#include "sedsim/vacuum_field.hpp"

namespace sedsim {

struct IntegratorConfig {
  double initial_step = 0.0;  // s
  double rel_tol = 0.0;
  double abs_tol_x = 0.0;     // m
  double abs_tol_v = 0.0;     // m/s
  double max_step = 0.0;      // s

  /// Steps start at and are capped by one twentieth of the natural period.
  /// Absolute tolerances are scaled to the ground-state position spread.
  static IntegratorConfig for_params(const OscillatorParams& params);

  /// Throws InvalidParameter unless tolerances are positive and
  /// 0 < initial_step <= max_step.
  void validate() const;
};

struct IntegratorStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  double smallest_step = 0.0;
  double largest_step = 0.0;
};

struct State {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
};

class Trajectory {
 public:
  Trajectory(OscillatorParams params, bool damping_enabled)
      : params_(params), damping_enabled_(damping_enabled) {}

  /// Throws DivergenceError on non-finite values and InvalidParameter when
  /// t does not exceed the previous time.
  void append(double t, double x, double v);
  void reserve(std::size_t n);

  std::size_t size() const noexcept { return t_.size(); }
  bool empty() const noexcept { return t_.empty(); }
  std::span<const double> times() const noexcept { return t_; }
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> v() const noexcept { return v_; }

  const OscillatorParams& params() const noexcept { return params_; }
  bool damping_enabled() const noexcept { return damping_enabled_; }

  IntegratorStats stats;

 private:
  OscillatorParams params_;
  bool damping_enabled_;
  std::vector<double> t_, x_, v_;
};

/// Right-hand side of the reduced equation of motion,
///   -omega0^2 x - [gamma omega0^2 v] + (e/m) E_x(t),
/// with the field summed directly from the mode set.
double acceleration(double x, double v, double t, const OscillatorParams& params,
                    const ModeSet& modes, bool damping_enabled);

/// Adaptive Cash-Karp 4(5) integrator for the reduced equation of motion.
///
/// The field at each stage is obtained from cached phasors: with
/// E(t) = Re sum_j P_j exp(i omega_j t), the products P_j exp(i omega_j t_n) at
/// the current step start are kept and rotated by per-stage factors
/// exp(i omega_j c_s h). Rotors are cached for the last two step sizes, and
/// the phasors are recomputed from scratch every kResyncInterval steps.
class Integrator {
 public:
  static constexpr unsigned kResyncInterval = 64;

  using Observer = std::function<void(const State&)>;

  Integrator(const OscillatorParams& params, const ModeSet& modes, IntegratorConfig cfg,
             bool damping_enabled = true);

  void reset(double t0, double x0, double v0);

  /// Integrates to exactly t1 >= current time. The observer, when given, sees
  /// every accepted step.
  void advance_to(double t1, const Observer& on_step = {});

  const State& state() const noexcept { return state_; }
  const IntegratorStats& stats() const noexcept { return stats_; }
  const IntegratorConfig& config() const noexcept { return cfg_; }

 private:
  struct RotorCache {
    double h = 0.0;
    std::vector<double> re, im;  // stage-major: [stage * n + j]
  };

  void resync();
  const RotorCache& rotors_for(double h);
  void fill_rotors(RotorCache& cache, double h) const;
  void stage_fields(const RotorCache& rotors, double* out) const;
  void rotate_phasors(const RotorCache& rotors);
  bool try_step(double h, double& err_norm, State& next);

  OscillatorParams params_;
  IntegratorConfig cfg_;
  double rate_;         // gamma omega0^2 or 0 when damping is off
  double omega0_sq_;
  double charge_over_mass_;
  std::vector<double> omega_;
  std::vector<double> p_re_, p_im_;  // P_j
  std::vector<double> q_re_, q_im_;  // P_j exp(i omega_j t)
  RotorCache max_cache_, scratch_cache_;
  State state_;
  double h_next_;
  unsigned since_resync_ = 0;
  IntegratorStats stats_;
};

/// Integrates from t0 to t1, recording every record_stride-th point of the
/// uniform grid t0 + k * max_step (plus t1). Steps are clamped to that grid,
/// so when max_step is accepted each grid point is one accepted step.
Trajectory integrate(const OscillatorParams& params, const ModeSet& modes, double t0, double t1,
                     double x0, double v0, const IntegratorConfig& cfg,
                     unsigned record_stride = 1, bool damping_enabled = true);

/// Closed-form steady-state response x(t) = Re sum_j X_j exp(-i omega_j t).
class SteadyState {
 public:
  SteadyState(const OscillatorParams& params, const ModeSet& modes);

  State operator()(double t) const;

  std::span<const double> omega() const noexcept { return omega_; }
  std::span<const std::complex<double>> response() const noexcept { return response_; }

 private:
  std::vector<double> omega_;
  std::vector<std::complex<double>> response_;
};

/// One-shot form of SteadyState: returns (x, v) at time t.
State analytic_steady_state(const ModeSet& modes, const OscillatorParams& params, double t);

struct GreensResult {
  double value = 0.0;       // m
  bool truncated = false;   // history shorter than 10 transient times
  double tail_bound = 0.0;  // bound on the neglected history contribution (m)
};

/// Position from the retarded Green function, integrated with composite
/// Simpson over [t - history_span, t] at a step of at most T0 / 40.
GreensResult greens_convolution(const ModeSet& modes, const OscillatorParams& params, double t,
                                double history_span);

/// 2 pi over the smallest nonzero frequency gap.
double integration_window(const ModeSet& modes);

}  // namespace sedsim
