// sedsim: command-line driver.
//
// Settings are resolved as built-in defaults, then the --config file, then
// command-line flags. Every run writes config.yaml with the effective values
// next to its data, so `sedsim <cmd> --config <out>/config.yaml` repeats it.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI/CLI.hpp>
#include <nlohmann/json.hpp>

#include "sedsim/config.hpp"
#include "sedsim/error.hpp"
#include "sedsim/io.hpp"
#include "sedsim/runner.hpp"

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  bool no_damping = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "flat YAML config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--no-damping", o.no_damping, "switch off radiation damping");
}

sedsim::RunConfig resolve(const Overrides& o, sedsim::RunConfig base = {}) {
  sedsim::RunConfig cfg = o.config.empty() ? base : sedsim::parse_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.out) cfg.output_dir = *o.out;
  if (o.no_damping) cfg.damping = false;
  cfg.validate();
  return cfg;
}

int report(const std::vector<sedsim::Check>& checks, const fs::path& dir) {
  for (const auto& c : checks) {
    std::printf("%-32s %s  value=%.6g target=%.6g tol=%.6g%s%s\n", c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.value, c.target, c.tolerance,
                c.detail.empty() ? "" : "  ", c.detail.c_str());
  }
  std::printf("artifacts: %s\n", dir.string().c_str());
  return sedsim::all_pass(checks) ? 0 : 1;
}

int simulate(const sedsim::RunConfig& cfg) {
  const auto r = sedsim::run_sequential(cfg);
  sedsim::write_artifacts(cfg.output_dir, cfg, r);
  std::printf("sigma_x %.6g m (target %.6g), %zu samples, %.1f s\n", r.analysis.summary.sigma_x,
              r.trajectory.params().sigma_x_target(), r.trajectory.size(), r.wall_seconds);
  std::printf("coherence time %.4g s (spectral %.4g s)\n", r.analysis.coherence.value,
              r.windows.tau_coh);
  return report(r.analysis.checks, cfg.output_dir);
}

int ensemble(sedsim::RunConfig cfg) {
  if (!cfg.damping || cfg.experiment == sedsim::Experiment::kDampingOff) {
    cfg.damping = false;
    cfg.experiment = sedsim::Experiment::kDampingOff;
    const auto r = sedsim::run_damping_off(cfg);
    sedsim::write_artifacts(cfg.output_dir, cfg, r);
    for (std::size_t k = 0; k < r.product_ratio.size(); ++k) {
      std::printf("t=%.4g s  sigma_x sigma_p / (hbar/2) = %.4f\n",
                  r.ensemble.checkpoint_times[k], r.product_ratio[k]);
    }
    auto checks = r.ensemble.checks;
    checks.insert(checks.end(), r.checks.begin(), r.checks.end());
    return report(checks, cfg.output_dir);
  }
  cfg.experiment = sedsim::Experiment::kEnsemble;
  const auto r = sedsim::run_ensemble(cfg);
  sedsim::write_artifacts(cfg.output_dir, cfg, r);
  std::printf("%zu members, %u workers, %.1f s\n", r.members.size(), r.workers, r.wall_seconds);
  return report(r.checks, cfg.output_dir);
}

int sweep(sedsim::RunConfig cfg) {
  cfg.experiment = sedsim::Experiment::kSweep;
  const auto r = sedsim::convergence_sweep(cfg);
  sedsim::write_artifacts(cfg.output_dir, cfg, r);
  std::printf("%8s %14s %10s %10s\n", "n_omega", "mean_energy", "deviation", "stat_err");
  for (const auto& row : r.rows) {
    std::printf("%8u %14.6g %10.4f %10.4f\n", row.n_omega, row.mean_energy, row.deviation,
                row.stat_error);
  }
  return report(r.checks, cfg.output_dir);
}

int bench(const sedsim::RunConfig& cfg, std::optional<unsigned> max_workers) {
  std::vector<unsigned> counts = cfg.bench_workers;
  if (max_workers) {
    counts.clear();
    for (unsigned w = 1; w < *max_workers; w *= 2) counts.push_back(w);
    counts.push_back(*max_workers);
  }
  const auto r = sedsim::scaling_benchmark(cfg, counts);
  sedsim::write_artifacts(cfg.output_dir, cfg, r);
  for (const auto& row : r.rows) std::printf("workers %3u  %.3f s\n", row.workers, row.wall_seconds);
  if (r.fit_valid) std::printf("alpha %.3f\n", r.alpha);
  return report(r.checks, cfg.output_dir);
}

int analyze(const fs::path& in, Overrides o) {
  sedsim::RunConfig base;
  if (o.config.empty() && fs::exists(in / "config.yaml")) o.config = (in / "config.yaml").string();
  if (!o.out) o.out = in.string();
  const sedsim::RunConfig cfg = resolve(o, base);

  const auto meta = sedsim::io::read_json(in / "trajectory.json");
  const auto& pj = meta.at("params");
  const sedsim::OscillatorParams params(pj.at("charge").get<double>(), pj.at("mass").get<double>(),
                                        pj.at("omega0").get<double>(), cfg.sharpness_threshold);
  const bool damping = meta.at("damping").get<bool>() && !o.no_damping;
  const auto traj = sedsim::io::read_trajectory_csv(in / "trajectory.csv", params, damping);
  const auto windows = sedsim::io::windows_from_json(meta.at("windows"));
  const auto a = sedsim::analyze_sequential(traj, windows, cfg);
  sedsim::write_analysis(cfg.output_dir, cfg, a, windows);
  std::printf("re-analyzed %zu samples from %s\n", traj.size(), in.string().c_str());
  return report(a.checks, cfg.output_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charged oscillator driven by a synthesized zero-point field"};
  app.require_subcommand(1);

  Overrides o;
  auto* sim = app.add_subcommand("simulate", "one long trajectory, sequential statistics");
  auto* ens = app.add_subcommand("ensemble", "many members, statistics at a fixed final time");
  auto* swp = app.add_subcommand("sweep", "ensemble energy against the number of frequencies");
  auto* bch = app.add_subcommand("bench", "wall time of one ensemble against worker count");
  auto* ana = app.add_subcommand("analyze", "re-analyze a stored trajectory");
  for (auto* cmd : {sim, ens, swp, bch, ana}) add_common(cmd, o);
  std::string input;
  ana->add_option("dir", input, "directory written by simulate")
      ->required()
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ana) return analyze(input, o);
    const sedsim::RunConfig cfg = resolve(o);
    if (*sim) return simulate(cfg);
    if (*ens) return ensemble(cfg);
    if (*swp) return sweep(cfg);
    return bench(cfg, o.workers);
  } catch (const sedsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
