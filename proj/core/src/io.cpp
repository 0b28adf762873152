#include "sedsim/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sedsim/error.hpp"

namespace sedsim::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  return out;
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,x,v\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << traj.times()[i] << ',' << traj.x()[i] << ',' << traj.v()[i] << '\n';
  }
}

Trajectory read_trajectory_csv(const fs::path& path, const OscillatorParams& params,
                               bool damping_enabled) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,x,v", 0) != 0) {
    throw Error(path.string() + ": expected header t,x,v");
  }
  Trajectory traj(params, damping_enabled);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const char* p = line.c_str();
    char* end = nullptr;
    double vals[3];
    for (int k = 0; k < 3; ++k) {
      vals[k] = std::strtod(p, &end);
      if (end == p || (k < 2 && *end != ',')) {
        throw Error(path.string() + ":" + std::to_string(lineno) + ": malformed row");
      }
      p = end + 1;
    }
    traj.append(vals[0], vals[1], vals[2]);
  }
  return traj;
}

void write_histogram_csv(const fs::path& path, const Histogram& h) {
  auto out = open_out(path);
  const auto d = h.in_range() > 0 ? h.density() : std::vector<double>(h.bins(), 0.0);
  out << "lo,hi,count,density\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    out << h.edges()[i] << ',' << h.edges()[i + 1] << ',' << h.counts()[i] << ',' << d[i] << '\n';
  }
}

void write_density_csv(const fs::path& path, const DensityGrid& d) {
  auto out = open_out(path);
  out << "lo,hi,density\n";
  for (std::size_t i = 0; i < d.density.size(); ++i) {
    out << d.edges[i] << ',' << d.edges[i + 1] << ',' << d.density[i] << '\n';
  }
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

json to_json(const OscillatorParams& p) {
  return {{"charge", p.charge()},           {"mass", p.mass()},
          {"omega0", p.omega0()},           {"gamma", p.gamma()},
          {"damping_rate", p.damping_rate()}, {"sigma_x_target", p.sigma_x_target()},
          {"sigma_p_target", p.sigma_p_target()}, {"ground_energy", p.ground_energy()}};
}

json to_json(const SimWindows& w) {
  return {{"tau_tran", w.tau_tran},
          {"tau_coh", w.tau_coh},
          {"delta_omega_min", w.delta_omega_min},
          {"tau_int", w.tau_int}};
}

SimWindows windows_from_json(const json& j) {
  SimWindows w;
  w.tau_tran = j.at("tau_tran").get<double>();
  w.tau_coh = j.at("tau_coh").get<double>();
  w.delta_omega_min = j.at("delta_omega_min").get<double>();
  w.tau_int = j.at("tau_int").get<double>();
  return w;
}

json to_json(const IntegratorStats& s) {
  return {{"steps_accepted", s.accepted},
          {"steps_rejected", s.rejected},
          {"smallest_step", s.smallest_step},
          {"largest_step", s.largest_step}};
}

json to_json(const DistributionSummary& s) {
  json moments = json::object();
  for (const auto& [k, v] : s.moments) moments[std::to_string(k)] = v;
  return {{"mean_x", s.mean_x},
          {"mean_p", s.mean_p},
          {"sigma_x", s.sigma_x},
          {"sigma_p", s.sigma_p},
          {"uncertainty_product", s.uncertainty_product},
          {"mean_energy", s.mean_energy},
          {"kurtosis", s.moments.count(4) ? s.kurtosis() : 0.0},
          {"moments", moments},
          {"sample_count", s.sample_count}};
}

json to_json(const FitReport& r) {
  return {{"ks_distance", r.ks_distance}, {"ks_threshold", r.ks_threshold},
          {"n_effective", r.n_effective}, {"ks_pass", r.ks_pass},
          {"chi2", r.chi2},               {"chi2_dof", r.chi2_dof},
          {"chi2_p_value", r.chi2_p_value}};
}

json to_json(const RegimeReport& r) {
  return {{"resonance_ratio", r.resonance_ratio},
          {"bandwidth_ratio", r.bandwidth_ratio},
          {"max_resonance_ratio", r.thresholds.max_resonance_ratio},
          {"max_bandwidth_ratio", r.thresholds.max_bandwidth_ratio},
          {"resonance_covered", r.resonance_covered},
          {"narrow_band", r.narrow_band},
          {"pass", r.pass()}};
}

}  // namespace sedsim::io
