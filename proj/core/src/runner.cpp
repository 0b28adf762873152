#include "sedsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "sedsim/constants.hpp"
#include "sedsim/error.hpp"
#include "sedsim/io.hpp"
#include "sedsim/rng.hpp"

namespace sedsim {

namespace fs = std::filesystem;
using nlohmann::json;
using C = PhysicalConstants;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string describe(const RegimeReport& r) {
  std::ostringstream os;
  os << "regime check failed: gamma omega0^2 / delta = " << r.resonance_ratio << " (max "
     << r.thresholds.max_resonance_ratio << "), delta / omega0 = " << r.bandwidth_ratio
     << " (max " << r.thresholds.max_bandwidth_ratio << ")";
  return os.str();
}

RegimeReport checked_regime(const RunConfig& cfg, const OscillatorParams& p, const FieldConfig& f) {
  RegimeReport r = validate_regime(p, f, cfg.thresholds());
  if (!r.pass()) throw ConfigError(describe(r));
  return r;
}

Check relative_check(std::string name, double value, double target, double tol) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.target = target;
  c.tolerance = tol;
  c.pass = std::abs(value / target - 1.0) <= tol;
  return c;
}

// Runs body(i) for i in [0, n) on `workers` threads pulling indices from a
// shared counter. The first exception escaping body is rethrown after joining.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  if (workers <= 1 || n <= 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back(c);
  return arr;
}

void write_echo(const fs::path& dir, const RunConfig& cfg) {
  io::write_text(dir / "config.yaml", echo_config(cfg));
}

}  // namespace

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void to_json(json& j, const Check& c) {
  j = json{{"name", c.name},     {"pass", c.pass},           {"value", c.value},
           {"target", c.target}, {"tolerance", c.tolerance}, {"detail", c.detail}};
}

SequentialAnalysis analyze_sequential(const Trajectory& traj, const SimWindows& windows,
                                      const RunConfig& cfg) {
  const OscillatorParams& p = traj.params();
  SequentialAnalysis a;
  a.t_start = cfg.transient_factor * windows.tau_tran;
  const PhaseSamples samples = sequential_sample(traj, a.t_start, 1);
  a.summary = summarize(samples, p);
  a.n_effective = (traj.times().back() - a.t_start) / windows.tau_coh;

  a.x_hist = Histogram::freedman_diaconis(samples.x);
  a.p_hist = Histogram::freedman_diaconis(samples.p);
  a.fit = goodness_of_fit(a.x_hist, p, a.n_effective);

  AmplitudeSeries env = envelope(traj);
  const auto first = static_cast<std::ptrdiff_t>(
      std::lower_bound(env.times.begin(), env.times.end(), a.t_start) - env.times.begin());
  env.times.erase(env.times.begin(), env.times.begin() + first);
  env.amplitude.erase(env.amplitude.begin(), env.amplitude.begin() + first);
  const AmplitudeSeries sub = subsample(env, cfg.amplitude_spacing * windows.tau_coh);
  a.amplitude_hist = Histogram::freedman_diaconis(sub.amplitude);
  a.direct = to_density(a.x_hist);
  a.reconstructed = reconstruct_from_amplitudes(sub.amplitude, a.x_hist.edges());
  a.total_variation = total_variation(a.direct, a.reconstructed);
  a.coherence = coherence_time_empirical(traj, a.t_start, CoherenceCriterion::kOneOverE,
                                         windows.tau_coh);

  // Without damping there is no steady state to test against.
  if (!traj.damping_enabled()) return a;
  a.checks.push_back(relative_check("sigma_x", a.summary.sigma_x, p.sigma_x_target(),
                                    cfg.sigma_tolerance));
  Check ks;
  ks.name = "ks_gaussian";
  ks.value = a.fit.ks_distance;
  ks.target = 0.0;
  ks.tolerance = a.fit.ks_threshold;
  ks.pass = a.fit.ks_pass;
  ks.detail = "n_effective = span / tau_coh";
  a.checks.push_back(ks);
  Check kurt;
  kurt.name = "kurtosis";
  kurt.value = a.summary.kurtosis();
  kurt.target = 3.0;
  kurt.tolerance = cfg.kurtosis_tolerance;
  kurt.pass = std::abs(kurt.value - 3.0) <= cfg.kurtosis_tolerance;
  a.checks.push_back(kurt);
  Check mean;
  mean.name = "zero_mean";
  mean.value = std::abs(a.summary.mean_x);
  mean.tolerance = 3.0 * a.summary.sigma_x / std::sqrt(a.n_effective);
  mean.pass = mean.value < mean.tolerance;
  a.checks.push_back(mean);
  Check tv;
  tv.name = "reconstruction_tv";
  tv.value = a.total_variation;
  tv.tolerance = cfg.tv_threshold;
  tv.pass = a.total_variation < cfg.tv_threshold;
  a.checks.push_back(tv);
  return a;
}

SequentialResult run_sequential(const RunConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const OscillatorParams p = cfg.oscillator();
  const FieldConfig f = cfg.field();
  const RegimeReport regime = checked_regime(cfg, p, f);
  ModeSet modes = sample_modes(p, f);
  const SimWindows windows = derive_windows(p, modes);
  if (!windows.separated(cfg.separation_ratio)) {
    std::ostringstream os;
    os << "tau_int / tau_tran = " << windows.tau_int / windows.tau_tran << " is below "
       << cfg.separation_ratio << "; increase n_omega";
    throw ConfigError(os.str());
  }
  const double t_end = cfg.transient_factor * windows.tau_tran + windows.tau_int;
  Trajectory traj = integrate(p, modes, 0.0, t_end, cfg.x0, cfg.v0, cfg.integrator(),
                              cfg.record_stride, cfg.damping);
  SequentialAnalysis analysis = analyze_sequential(traj, windows, cfg);
  return SequentialResult{std::move(modes), windows,     regime,
                          std::move(traj),  std::move(analysis), seconds_since(t0)};
}

EnsembleOptions ensemble_options(const RunConfig& cfg) {
  EnsembleOptions o;
  o.n_omega = cfg.n_omega;
  o.n_particles = cfg.n_particles;
  o.workers = cfg.workers;
  o.damping = cfg.damping;
  return o;
}

double ensemble_final_time(const RunConfig& cfg, const SimWindows& windows) {
  return cfg.transient_factor * windows.tau_tran + cfg.ensemble_coherence_factor * windows.tau_coh;
}

EnsembleResult run_ensemble(const RunConfig& cfg) { return run_ensemble(cfg, ensemble_options(cfg)); }

EnsembleResult run_ensemble(const RunConfig& cfg, const EnsembleOptions& opt) {
  cfg.validate();
  if (opt.n_particles == 0) throw ConfigError("key 'n_particles': must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  const OscillatorParams p = cfg.oscillator();
  EnsembleResult r;
  r.n_omega = opt.n_omega;
  r.workers = std::max(1u, opt.workers);
  r.damping = opt.damping;
  r.regime = checked_regime(cfg, p, cfg.field(opt.n_omega, cfg.seed));

  // Every member shares the frequency grid, so any member's windows apply to all.
  const ModeSet reference = sample_modes(p, cfg.field(opt.n_omega, rng::member_seed(cfg.seed, 0)));
  r.windows = derive_windows(p, reference);
  const double t_final = ensemble_final_time(cfg, r.windows);
  for (double t : opt.extra_checkpoints) {
    if (t > 0.0 && t < t_final) r.checkpoint_times.push_back(t);
  }
  std::sort(r.checkpoint_times.begin(), r.checkpoint_times.end());
  r.checkpoint_times.erase(std::unique(r.checkpoint_times.begin(), r.checkpoint_times.end()),
                           r.checkpoint_times.end());
  r.checkpoint_times.push_back(t_final);

  const IntegratorConfig icfg = cfg.integrator();
  r.members.resize(opt.n_particles);
  parallel_for(opt.n_particles, r.workers, [&](std::size_t i) {
    MemberResult& m = r.members[i];
    m.index = i;
    m.seed = rng::member_seed(cfg.seed, i);
    try {
      const ModeSet modes = sample_modes(p, cfg.field(opt.n_omega, m.seed));
      Integrator integ(p, modes, icfg, opt.damping);
      integ.reset(0.0, cfg.x0, cfg.v0);
      m.checkpoints.reserve(r.checkpoint_times.size());
      for (double t : r.checkpoint_times) {
        integ.advance_to(t);
        m.checkpoints.push_back(integ.state());
      }
    } catch (const DivergenceError& e) {
      m.excluded = true;
      m.error = e.what();
    } catch (const StiffnessError& e) {
      m.excluded = true;
      m.error = e.what();
    }
  });

  r.excluded = static_cast<std::uint64_t>(std::count_if(
      r.members.begin(), r.members.end(), [](const MemberResult& m) { return m.excluded; }));
  if (r.excluded > 0 && 1000 * r.excluded >= opt.n_particles) {
    throw Error("ensemble failed: " + std::to_string(r.excluded) + " of " +
                std::to_string(opt.n_particles) + " members diverged");
  }
  for (std::size_t k = 0; k < r.checkpoint_times.size(); ++k) {
    r.checkpoint_summaries.push_back(aggregate(r, k, p));
  }
  r.summary = r.checkpoint_summaries.back();
  r.wall_seconds = seconds_since(t0);

  if (opt.damping) {
    r.checks.push_back(relative_check("uncertainty_product", r.summary.uncertainty_product,
                                      0.5 * C::hbar, cfg.product_tolerance));
    r.checks.push_back(relative_check("mean_energy", r.summary.mean_energy, p.ground_energy(),
                                      cfg.energy_tolerance));
  }
  Check bookkeeping;
  bookkeeping.name = "member_bookkeeping";
  bookkeeping.value = static_cast<double>(r.summary.sample_count + r.excluded);
  bookkeeping.target = opt.n_particles;
  bookkeeping.pass = r.summary.sample_count + r.excluded == opt.n_particles;
  if (r.excluded > 0) bookkeeping.detail = std::to_string(r.excluded) + " members excluded";
  r.checks.push_back(bookkeeping);
  return r;
}

DistributionSummary aggregate(const EnsembleResult& r, std::size_t checkpoint,
                              const OscillatorParams& params) {
  std::vector<State> finals;
  finals.reserve(r.members.size());
  for (const auto& m : r.members) {
    if (!m.excluded) finals.push_back(m.checkpoints.at(checkpoint));
  }
  return summarize(ensemble_sample(finals, params), params);
}

DampingOffResult run_damping_off(const RunConfig& cfg) {
  EnsembleOptions opt = ensemble_options(cfg);
  opt.damping = false;
  const OscillatorParams p = cfg.oscillator();
  for (int k = 1; k <= 5; ++k) opt.extra_checkpoints.push_back(k * p.transient_time());
  DampingOffResult out;
  out.ensemble = run_ensemble(cfg, opt);
  const double half_hbar = 0.5 * C::hbar;
  for (const auto& s : out.ensemble.checkpoint_summaries) {
    out.product_ratio.push_back(s.uncertainty_product / half_hbar);
  }
  Check exceeds;
  exceeds.name = "product_exceeds_twice_minimum";
  exceeds.value = out.product_ratio.back();
  exceeds.target = 2.0;
  exceeds.pass = exceeds.value > 2.0;
  out.checks.push_back(exceeds);
  Check monotone;
  monotone.name = "product_non_decreasing";
  monotone.pass = true;
  for (std::size_t k = 1; k < out.product_ratio.size(); ++k) {
    if (out.product_ratio[k] < out.product_ratio[k - 1]) monotone.pass = false;
  }
  monotone.value = out.product_ratio.front();
  monotone.detail = "checkpoints k * tau_tran, k = 1..5, then the final time";
  out.checks.push_back(monotone);
  return out;
}

SweepResult convergence_sweep(const RunConfig& cfg) {
  SweepResult out;
  const OscillatorParams p = cfg.oscillator();
  for (unsigned n : cfg.sweep_n_omega) {
    EnsembleOptions opt = ensemble_options(cfg);
    opt.n_omega = n;
    const EnsembleResult r = run_ensemble(cfg, opt);
    SweepRow row;
    row.n_omega = n;
    row.members = r.summary.sample_count;
    row.mean_energy = r.summary.mean_energy;
    row.deviation = std::abs(row.mean_energy / p.ground_energy() - 1.0);
    row.uncertainty_ratio = r.summary.uncertainty_product / (0.5 * C::hbar);
    // Energy of one member is exponentially distributed in the Gaussian limit,
    // so the relative standard error of the mean is 1 / sqrt(N).
    row.stat_error = 1.0 / std::sqrt(static_cast<double>(row.members));
    out.rows.push_back(row);
  }
  const SweepRow& first = out.rows.front();
  const SweepRow& last = out.rows.back();
  Check trend;
  trend.name = "deviation_last_not_above_first";
  trend.value = last.deviation;
  trend.target = first.deviation;
  trend.pass = last.deviation <= first.deviation;
  trend.detail = "n_omega " + std::to_string(last.n_omega) + " vs " + std::to_string(first.n_omega);
  out.checks.push_back(trend);
  Check energy;
  energy.name = "energy_at_largest_n_omega";
  energy.value = last.deviation;
  energy.tolerance = cfg.energy_tolerance;
  energy.pass = last.deviation <= cfg.energy_tolerance;
  out.checks.push_back(energy);
  return out;
}

std::vector<unsigned> default_worker_counts() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::vector<unsigned> w;
  for (unsigned k = 1; k < hw; k *= 2) w.push_back(k);
  w.push_back(hw);
  return w;
}

ScalingResult scaling_benchmark(const RunConfig& cfg, std::vector<unsigned> worker_counts) {
  if (worker_counts.empty()) worker_counts = default_worker_counts();
  ScalingResult out;
  out.hardware_threads = std::max(1u, std::thread::hardware_concurrency());
  out.identical = true;
  std::vector<MemberResult> reference;
  for (unsigned w : worker_counts) {
    EnsembleOptions opt = ensemble_options(cfg);
    opt.workers = w;
    EnsembleResult r = run_ensemble(cfg, opt);
    out.rows.push_back({w, r.wall_seconds});
    if (reference.empty()) {
      reference = std::move(r.members);
      continue;
    }
    for (std::size_t i = 0; i < reference.size(); ++i) {
      const auto& a = reference[i].checkpoints;
      const auto& b = r.members[i].checkpoints;
      if (a.size() != b.size()) out.identical = false;
      for (std::size_t k = 0; k < a.size() && out.identical; ++k) {
        if (a[k].t != b[k].t || a[k].x != b[k].x || a[k].v != b[k].v) out.identical = false;
      }
    }
  }

  // Least squares on log t = log C - alpha log w over distinct worker counts
  // that do not exceed the hardware thread count.
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : out.rows) {
    if (row.workers <= out.hardware_threads) {
      pts.emplace_back(std::log(static_cast<double>(row.workers)), std::log(row.wall_seconds));
    }
  }
  std::vector<double> xs;
  for (const auto& [x, y] : pts) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  const bool spread = std::unique(xs.begin(), xs.end()) - xs.begin() >= 2;
  Check det;
  det.name = "parallel_determinism";
  det.pass = out.identical && out.rows.size() >= 2;
  det.detail = out.rows.size() >= 2 ? "members compared bit for bit across worker counts"
                                    : "needs at least two runs";
  out.checks.push_back(det);
  Check scaling;
  scaling.name = "scaling_exponent";
  scaling.target = 1.0;
  if (spread) {
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    const double slope = sxy / sxx;
    out.alpha = -slope;
    out.prefactor = std::exp(my - slope * mx);
    for (const auto& [x, y] : pts) out.residuals.push_back(y - (my + slope * (x - mx)));
    out.fit_valid = true;
    scaling.value = out.alpha;
    scaling.pass = out.alpha >= 0.8 && out.alpha <= 1.05;
    scaling.detail = "alpha must lie in [0.8, 1.05]";
  } else {
    scaling.pass = false;
    scaling.detail = "host exposes " + std::to_string(out.hardware_threads) +
                     " hardware thread(s); a scaling exponent needs at least two distinct "
                     "worker counts within the core count";
  }
  out.checks.push_back(scaling);
  return out;
}

void write_analysis(const fs::path& dir, const RunConfig& cfg, const SequentialAnalysis& a,
                    const SimWindows& windows) {
  io::write_histogram_csv(dir / "histogram_x.csv", a.x_hist);
  io::write_histogram_csv(dir / "histogram_p.csv", a.p_hist);
  io::write_histogram_csv(dir / "histogram_amplitude.csv", a.amplitude_hist);
  io::write_density_csv(dir / "reconstruction.csv", a.reconstructed);
  const OscillatorParams p = cfg.oscillator();
  json report = {
      {"experiment", "sequential"},
      {"params", io::to_json(p)},
      {"windows", io::to_json(windows)},
      {"t_start", a.t_start},
      {"summary", io::to_json(a.summary)},
      {"fit", io::to_json(a.fit)},
      {"targets",
       {{"sigma_x", p.sigma_x_target()},
        {"sigma_p", p.sigma_p_target()},
        {"uncertainty_product", 0.5 * C::hbar},
        {"ground_energy", p.ground_energy()},
        {"kurtosis", 3.0}}},
      {"reconstruction_total_variation", a.total_variation},
      {"coherence",
       {{"empirical", a.coherence.value},
        {"decayed", a.coherence.decayed},
        {"spectral", windows.tau_coh},
        {"ratio", a.coherence.value / windows.tau_coh}}},
      {"checks", checks_json(a.checks)},
      {"pass", all_pass(a.checks)},
  };
  io::write_json(dir / "report.json", report);
  write_echo(dir, cfg);
}

void write_artifacts(const fs::path& dir, const RunConfig& cfg, const SequentialResult& r) {
  io::write_trajectory_csv(dir / "trajectory.csv", r.trajectory);
  json sidecar = {{"params", io::to_json(r.trajectory.params())},
                  {"seed", cfg.seed},
                  {"damping", r.trajectory.damping_enabled()},
                  {"windows", io::to_json(r.windows)},
                  {"integrator", io::to_json(r.trajectory.stats)},
                  {"samples", r.trajectory.size()},
                  {"wall_seconds", r.wall_seconds}};
  io::write_json(dir / "trajectory.json", sidecar);
  json modes;
  to_json(modes, r.modes);
  io::write_json(dir / "modes.json", modes);
  write_analysis(dir, cfg, r.analysis, r.windows);
  json report = io::read_json(dir / "report.json");
  report["regime"] = io::to_json(r.regime);
  report["wall_seconds"] = r.wall_seconds;
  io::write_json(dir / "report.json", report);
}

void write_artifacts(const fs::path& dir, const RunConfig& cfg, const EnsembleResult& r) {
  {
    fs::create_directories(dir);
    std::ofstream out(dir / "members.csv");
    out.precision(17);
    out << "index,seed,t,x,v,excluded\n";
    for (const auto& m : r.members) {
      const State s = m.excluded ? State{} : m.checkpoints.back();
      out << m.index << ',' << m.seed << ',' << s.t << ',' << s.x << ',' << s.v << ','
          << (m.excluded ? 1 : 0) << '\n';
    }
  }
  {
    std::ofstream out(dir / "checkpoints.csv");
    out.precision(17);
    out << "t,sigma_x,sigma_p,product_ratio,mean_energy\n";
    for (std::size_t k = 0; k < r.checkpoint_times.size(); ++k) {
      const auto& s = r.checkpoint_summaries[k];
      out << r.checkpoint_times[k] << ',' << s.sigma_x << ',' << s.sigma_p << ','
          << s.uncertainty_product / (0.5 * C::hbar) << ',' << s.mean_energy << '\n';
    }
  }
  std::vector<State> finals;
  for (const auto& m : r.members) {
    if (!m.excluded) finals.push_back(m.checkpoints.back());
  }
  const OscillatorParams p = cfg.oscillator();
  const PhaseSamples samples = ensemble_sample(finals, p);
  if (samples.size() >= 2) {
    io::write_histogram_csv(dir / "histogram_x.csv", Histogram::freedman_diaconis(samples.x));
    io::write_histogram_csv(dir / "histogram_p.csv", Histogram::freedman_diaconis(samples.p));
  }
  json report = {{"experiment", r.damping ? "ensemble" : "damping_off"},
                 {"params", io::to_json(p)},
                 {"windows", io::to_json(r.windows)},
                 {"separated", r.windows.separated(cfg.separation_ratio)},
                 {"regime", io::to_json(r.regime)},
                 {"n_omega", r.n_omega},
                 {"members", r.members.size()},
                 {"excluded", r.excluded},
                 {"final_time", r.checkpoint_times.back()},
                 {"summary", io::to_json(r.summary)},
                 {"targets",
                  {{"uncertainty_product", 0.5 * C::hbar}, {"ground_energy", p.ground_energy()}}},
                 {"workers", r.workers},
                 {"wall_seconds", r.wall_seconds},
                 {"checks", checks_json(r.checks)},
                 {"pass", all_pass(r.checks)}};
  io::write_json(dir / "report.json", report);
  write_echo(dir, cfg);
}

void write_artifacts(const fs::path& dir, const RunConfig& cfg, const DampingOffResult& r) {
  write_artifacts(dir, cfg, r.ensemble);
  json report = io::read_json(dir / "report.json");
  report["product_ratio"] = r.product_ratio;
  report["checkpoint_times"] = r.ensemble.checkpoint_times;
  auto checks = r.ensemble.checks;
  checks.insert(checks.end(), r.checks.begin(), r.checks.end());
  report["checks"] = checks_json(checks);
  report["pass"] = all_pass(checks);
  io::write_json(dir / "report.json", report);
}

void write_artifacts(const fs::path& dir, const RunConfig& cfg, const SweepResult& r) {
  fs::create_directories(dir);
  std::ofstream out(dir / "sweep.csv");
  out.precision(17);
  out << "n_omega,members,mean_energy,deviation,stat_error,uncertainty_ratio\n";
  json rows = json::array();
  for (const auto& row : r.rows) {
    out << row.n_omega << ',' << row.members << ',' << row.mean_energy << ',' << row.deviation
        << ',' << row.stat_error << ',' << row.uncertainty_ratio << '\n';
    rows.push_back({{"n_omega", row.n_omega},
                    {"members", row.members},
                    {"mean_energy", row.mean_energy},
                    {"deviation", row.deviation},
                    {"stat_error", row.stat_error},
                    {"uncertainty_ratio", row.uncertainty_ratio}});
  }
  io::write_json(dir / "report.json", {{"experiment", "sweep"},
                                       {"ground_energy", cfg.oscillator().ground_energy()},
                                       {"rows", rows},
                                       {"checks", checks_json(r.checks)},
                                       {"pass", all_pass(r.checks)}});
  write_echo(dir, cfg);
}

void write_artifacts(const fs::path& dir, const RunConfig& cfg, const ScalingResult& r) {
  fs::create_directories(dir);
  std::ofstream out(dir / "scaling.csv");
  out.precision(17);
  out << "workers,wall_seconds\n";
  json rows = json::array();
  for (const auto& row : r.rows) {
    out << row.workers << ',' << row.wall_seconds << '\n';
    rows.push_back({{"workers", row.workers}, {"wall_seconds", row.wall_seconds}});
  }
  io::write_json(dir / "report.json", {{"experiment", "bench"},
                                       {"hardware_threads", r.hardware_threads},
                                       {"rows", rows},
                                       {"fit_valid", r.fit_valid},
                                       {"alpha", r.alpha},
                                       {"prefactor", r.prefactor},
                                       {"residuals", r.residuals},
                                       {"identical", r.identical},
                                       {"checks", checks_json(r.checks)},
                                       {"pass", all_pass(r.checks)}});
  write_echo(dir, cfg);
}

}  // namespace sedsim
