#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sedsim/dynamics.hpp"
#include "sedsim/params.hpp"

namespace sedsim {

enum class Experiment { kSequential, kEnsemble, kSweep, kDampingOff };

std::string_view to_string(Experiment e) noexcept;

/// Everything needed to reproduce a run. Field names double as config keys.
struct RunConfig {
  // Oscillator.
  double charge_e = 1.0;
  double mass_me_multiple = 1e-4;
  double omega0 = 1e16;
  double sharpness_threshold = OscillatorParams::kDefaultSharpnessThreshold;

  // Field sampling.
  double delta_over_resonance_width = 220.0;
  unsigned n_omega = 2000;
  std::string scheme = "single_angle";  // or "spherical"
  unsigned n_theta = 10;                // spherical only
  unsigned n_phi = 10;                  // spherical only
  bool shared_phi_offset = false;       // spherical only
  std::uint64_t seed = 1;

  // Integrator. Steps are fractions of the natural period; absolute
  // tolerances are fractions of the ground-state spread.
  double steps_per_period = 20.0;
  double rel_tol = 1e-5;
  double abs_tol_sigma = 1e-5;
  unsigned record_stride = 1;
  double x0 = 0.0;
  double v0 = 0.0;
  bool damping = true;

  // Experiment.
  Experiment experiment = Experiment::kSequential;
  unsigned n_particles = 2000;
  std::vector<unsigned> sweep_n_omega{50, 100, 200, 500};
  double transient_factor = 5.0;        // discard this many transient times
  double ensemble_coherence_factor = 10.0;
  double amplitude_spacing = 3.0;       // in coherence times
  double separation_ratio = SimWindows::kDefaultSeparation;
  double max_resonance_ratio = 0.2;
  double max_bandwidth_ratio = 0.2;
  std::vector<unsigned> bench_workers{};  // empty: 1, 2, 4, ... up to the core count

  // Acceptance tolerances.
  double sigma_tolerance = 0.05;
  double product_tolerance = 0.05;
  double energy_tolerance = 0.04;
  double kurtosis_tolerance = 0.15;
  double tv_threshold = 0.05;

  // Execution.
  std::string output_dir = "sedsim-out";
  unsigned workers = 1;

  bool operator==(const RunConfig&) const = default;

  OscillatorParams oscillator() const;
  FieldConfig field() const;
  FieldConfig field(unsigned n_omega_override, std::uint64_t seed_override) const;
  IntegratorConfig integrator() const;
  RegimeThresholds thresholds() const;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Parses a flat YAML mapping. Unknown keys, wrong types and invalid values
/// are reported with the key name and line number.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_string(std::string_view text, std::string_view source = "<string>");

/// Every key with its effective value, in a form parse_config_string accepts.
std::string echo_config(const RunConfig& cfg);

}  // namespace sedsim
