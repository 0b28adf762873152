#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sedsim/analysis.hpp"
#include "sedsim/config.hpp"
#include "sedsim/dynamics.hpp"
#include "sedsim/vacuum_field.hpp"

namespace sedsim {

/// One pass/fail line of a run report.
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

bool all_pass(const std::vector<Check>& checks);
void to_json(nlohmann::json& j, const Check& c);

struct SequentialAnalysis {
  double t_start = 0.0;
  double n_effective = 0.0;
  DistributionSummary summary;
  FitReport fit;
  Histogram x_hist{std::vector<double>{0.0, 1.0}};
  Histogram p_hist{std::vector<double>{0.0, 1.0}};
  Histogram amplitude_hist{std::vector<double>{0.0, 1.0}};
  DensityGrid direct;
  DensityGrid reconstructed;
  double total_variation = 0.0;
  CoherenceEstimate coherence;
  std::vector<Check> checks;
};

/// Statistics of one long trajectory after discarding transient_factor
/// transient times: histograms, Gaussian fit, envelope reconstruction and
/// the empirical coherence time. Acceptance checks are added only for damped
/// trajectories.
SequentialAnalysis analyze_sequential(const Trajectory& traj, const SimWindows& windows,
                                      const RunConfig& cfg);

struct SequentialResult {
  ModeSet modes;
  SimWindows windows;
  RegimeReport regime;
  Trajectory trajectory;
  SequentialAnalysis analysis;
  double wall_seconds = 0.0;
};

/// Integrates one trajectory over [0, transient_factor * tau_tran + tau_int].
/// Throws ConfigError when the regime check fails or tau_int is shorter than
/// separation_ratio transient times.
SequentialResult run_sequential(const RunConfig& cfg);

struct MemberResult {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::vector<State> checkpoints;  // one per EnsembleResult::checkpoint_times
  bool excluded = false;
  std::string error;
};

struct EnsembleOptions {
  unsigned n_omega = 0;
  unsigned n_particles = 0;
  unsigned workers = 1;
  bool damping = true;
  /// Extra sampling times before the final time (s).
  std::vector<double> extra_checkpoints;
};

EnsembleOptions ensemble_options(const RunConfig& cfg);

struct EnsembleResult {
  std::vector<MemberResult> members;
  std::vector<double> checkpoint_times;  // ascending; the last is the final time
  std::vector<DistributionSummary> checkpoint_summaries;
  DistributionSummary summary;  // at the final time
  SimWindows windows;
  RegimeReport regime;
  std::uint64_t excluded = 0;
  unsigned n_omega = 0;
  unsigned workers = 1;
  bool damping = true;
  double wall_seconds = 0.0;
  std::vector<Check> checks;
};

/// Final time transient_factor * tau_tran + ensemble_coherence_factor * tau_coh.
double ensemble_final_time(const RunConfig& cfg, const SimWindows& windows);

/// Members differ only in their seed rng::member_seed(cfg.seed, index), which
/// drives directions, polarizations and phases; the frequency grid is shared.
/// Results are stored by member index, so any worker count gives identical
/// output. Throws Error when 0.1% or more of the members fail.
EnsembleResult run_ensemble(const RunConfig& cfg);
EnsembleResult run_ensemble(const RunConfig& cfg, const EnsembleOptions& opt);

/// Aggregate recomputed from the member list at one checkpoint.
DistributionSummary aggregate(const EnsembleResult& r, std::size_t checkpoint,
                              const OscillatorParams& params);

struct DampingOffResult {
  EnsembleResult ensemble;
  std::vector<double> product_ratio;  // sigma_x sigma_p / (hbar / 2) per checkpoint
  std::vector<Check> checks;
};

/// Undamped ensemble sampled at k * tau_tran (k = 1..5) and at the ensemble final time.
DampingOffResult run_damping_off(const RunConfig& cfg);

struct SweepRow {
  unsigned n_omega = 0;
  double mean_energy = 0.0;
  double deviation = 0.0;   // |E / (hbar omega0 / 2) - 1|
  double stat_error = 0.0;  // standard error of the energy ratio
  double uncertainty_ratio = 0.0;
  std::uint64_t members = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<Check> checks;
};

/// One ensemble of n_particles members per entry of sweep_n_omega.
SweepResult convergence_sweep(const RunConfig& cfg);

struct ScalingRow {
  unsigned workers = 0;
  double wall_seconds = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  unsigned hardware_threads = 0;
  bool fit_valid = false;
  double alpha = 0.0;      // t = prefactor * w^(-alpha)
  double prefactor = 0.0;
  std::vector<double> residuals;  // log-space
  bool identical = false;  // every run reproduced the first bit for bit
  std::vector<Check> checks;
};

/// Worker counts 1, 2, 4, ... up to the hardware thread count (and that count).
std::vector<unsigned> default_worker_counts();

/// Runs the same ensemble once per worker count and fits t = C w^(-alpha).
ScalingResult scaling_benchmark(const RunConfig& cfg, std::vector<unsigned> worker_counts);

/// Artifact writers; each also writes the effective-config echo.
void write_artifacts(const std::filesystem::path& dir, const RunConfig& cfg,
                     const SequentialResult& r);
void write_artifacts(const std::filesystem::path& dir, const RunConfig& cfg,
                     const EnsembleResult& r);
void write_artifacts(const std::filesystem::path& dir, const RunConfig& cfg,
                     const DampingOffResult& r);
void write_artifacts(const std::filesystem::path& dir, const RunConfig& cfg, const SweepResult& r);
void write_artifacts(const std::filesystem::path& dir, const RunConfig& cfg,
                     const ScalingResult& r);
void write_analysis(const std::filesystem::path& dir, const RunConfig& cfg,
                    const SequentialAnalysis& a, const SimWindows& windows);

}  // namespace sedsim
