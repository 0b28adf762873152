#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sedsim/analysis.hpp"
#include "sedsim/dynamics.hpp"
#include "sedsim/params.hpp"

namespace sedsim::io {

/// Columns t, x, v with 17 significant digits.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path, const OscillatorParams& params,
                               bool damping_enabled);

/// Columns lo, hi, count, density.
void write_histogram_csv(const std::filesystem::path& path, const Histogram& h);
/// Columns lo, hi, density.
void write_density_csv(const std::filesystem::path& path, const DensityGrid& d);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

nlohmann::json to_json(const OscillatorParams& p);
nlohmann::json to_json(const SimWindows& w);
nlohmann::json to_json(const IntegratorStats& s);
nlohmann::json to_json(const DistributionSummary& s);
nlohmann::json to_json(const FitReport& r);
nlohmann::json to_json(const RegimeReport& r);

SimWindows windows_from_json(const nlohmann::json& j);

}  // namespace sedsim::io
