#include "sedsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "sedsim/constants.hpp"
#include "sedsim/error.hpp"

namespace sedsim {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep YAML from reading integral doubles as ints; harmless either way, but clearer.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string fmt_list(const std::vector<unsigned>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

std::optional<Experiment> experiment_from(std::string_view s) {
  if (s == "sequential") return Experiment::kSequential;
  if (s == "ensemble") return Experiment::kEnsemble;
  if (s == "sweep") return Experiment::kSweep;
  if (s == "damping_off") return Experiment::kDampingOff;
  return std::nullopt;
}

[[noreturn]] void fail(std::string_view source, const YAML::Mark& mark, const std::string& key,
                       const std::string& what) {
  std::ostringstream os;
  os << source << ":" << mark.line + 1 << ": key '" << key << "': " << what;
  throw ConfigError(os.str());
}

// One entry per key: how to read it from YAML and how to print it back.
struct Field {
  std::function<void(RunConfig&, const YAML::Node&)> read;
  std::function<std::string(const RunConfig&)> write;
};

template <class T>
Field scalar(T RunConfig::*member) {
  return {[member](RunConfig& c, const YAML::Node& n) { c.*member = n.as<T>(); },
          [member](const RunConfig& c) {
            if constexpr (std::is_same_v<T, double>) {
              return fmt_double(c.*member);
            } else if constexpr (std::is_same_v<T, bool>) {
              return std::string(c.*member ? "true" : "false");
            } else if constexpr (std::is_same_v<T, std::string>) {
              return c.*member;
            } else {
              return std::to_string(c.*member);
            }
          }};
}

Field unsigned_list(std::vector<unsigned> RunConfig::*member) {
  return {[member](RunConfig& c, const YAML::Node& n) {
            if (!n.IsSequence()) throw YAML::TypedBadConversion<std::vector<unsigned>>(n.Mark());
            c.*member = n.as<std::vector<unsigned>>();
          },
          [member](const RunConfig& c) { return fmt_list(c.*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"charge_e", scalar(&RunConfig::charge_e)},
      {"mass_me_multiple", scalar(&RunConfig::mass_me_multiple)},
      {"omega0", scalar(&RunConfig::omega0)},
      {"sharpness_threshold", scalar(&RunConfig::sharpness_threshold)},
      {"delta_over_resonance_width", scalar(&RunConfig::delta_over_resonance_width)},
      {"n_omega", scalar(&RunConfig::n_omega)},
      {"scheme", scalar(&RunConfig::scheme)},
      {"n_theta", scalar(&RunConfig::n_theta)},
      {"n_phi", scalar(&RunConfig::n_phi)},
      {"shared_phi_offset", scalar(&RunConfig::shared_phi_offset)},
      {"seed", scalar(&RunConfig::seed)},
      {"steps_per_period", scalar(&RunConfig::steps_per_period)},
      {"rel_tol", scalar(&RunConfig::rel_tol)},
      {"abs_tol_sigma", scalar(&RunConfig::abs_tol_sigma)},
      {"record_stride", scalar(&RunConfig::record_stride)},
      {"x0", scalar(&RunConfig::x0)},
      {"v0", scalar(&RunConfig::v0)},
      {"damping", scalar(&RunConfig::damping)},
      {"experiment",
       {[](RunConfig& c, const YAML::Node& n) {
          const auto e = experiment_from(n.as<std::string>());
          if (!e) throw std::invalid_argument("expected sequential, ensemble, sweep or damping_off");
          c.experiment = *e;
        },
        [](const RunConfig& c) { return std::string(to_string(c.experiment)); }}},
      {"n_particles", scalar(&RunConfig::n_particles)},
      {"sweep_n_omega", unsigned_list(&RunConfig::sweep_n_omega)},
      {"transient_factor", scalar(&RunConfig::transient_factor)},
      {"ensemble_coherence_factor", scalar(&RunConfig::ensemble_coherence_factor)},
      {"amplitude_spacing", scalar(&RunConfig::amplitude_spacing)},
      {"separation_ratio", scalar(&RunConfig::separation_ratio)},
      {"max_resonance_ratio", scalar(&RunConfig::max_resonance_ratio)},
      {"max_bandwidth_ratio", scalar(&RunConfig::max_bandwidth_ratio)},
      {"bench_workers", unsigned_list(&RunConfig::bench_workers)},
      {"sigma_tolerance", scalar(&RunConfig::sigma_tolerance)},
      {"product_tolerance", scalar(&RunConfig::product_tolerance)},
      {"energy_tolerance", scalar(&RunConfig::energy_tolerance)},
      {"kurtosis_tolerance", scalar(&RunConfig::kurtosis_tolerance)},
      {"tv_threshold", scalar(&RunConfig::tv_threshold)},
      {"output_dir", scalar(&RunConfig::output_dir)},
      {"workers", scalar(&RunConfig::workers)},
  };
  return table;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("key '" + key + "': " + what);
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::kSequential: return "sequential";
    case Experiment::kEnsemble: return "ensemble";
    case Experiment::kSweep: return "sweep";
    case Experiment::kDampingOff: return "damping_off";
  }
  return "sequential";
}

OscillatorParams RunConfig::oscillator() const {
  return OscillatorParams(charge_e * PhysicalConstants::electron_charge,
                          mass_me_multiple * PhysicalConstants::electron_mass, omega0,
                          sharpness_threshold);
}

FieldConfig RunConfig::field() const { return field(n_omega, seed); }

FieldConfig RunConfig::field(unsigned n_omega_override, std::uint64_t seed_override) const {
  const OscillatorParams p = oscillator();
  FieldConfig f;
  f.delta = delta_over_resonance_width * p.damping_rate();
  f.n_omega = n_omega_override;
  f.seed = seed_override;
  if (scheme == "spherical") {
    f.scheme = UniformSphericalScheme{n_omega_override, n_theta, n_phi, shared_phi_offset};
  } else {
    f.scheme = SingleAngleScheme{};
  }
  return f;
}

IntegratorConfig RunConfig::integrator() const {
  const OscillatorParams p = oscillator();
  IntegratorConfig c;
  c.max_step = p.natural_period() / steps_per_period;
  c.initial_step = c.max_step;
  c.rel_tol = rel_tol;
  c.abs_tol_x = abs_tol_sigma * p.sigma_x_target();
  c.abs_tol_v = c.abs_tol_x * p.omega0();
  return c;
}

RegimeThresholds RunConfig::thresholds() const {
  return {max_resonance_ratio, max_bandwidth_ratio};
}

void RunConfig::validate() const {
  require(std::isfinite(charge_e), "charge_e", "must be finite");
  require(mass_me_multiple > 0.0 && std::isfinite(mass_me_multiple), "mass_me_multiple",
          "must be positive");
  require(omega0 > 0.0 && std::isfinite(omega0), "omega0", "must be positive");
  require(sharpness_threshold > 0.0, "sharpness_threshold", "must be positive");
  require(delta_over_resonance_width > 0.0, "delta_over_resonance_width", "must be positive");
  require(n_omega >= 2, "n_omega", "must be at least 2");
  require(scheme == "single_angle" || scheme == "spherical", "scheme",
          "must be single_angle or spherical");
  require(n_theta >= 2, "n_theta", "must be at least 2");
  require(n_phi >= 1, "n_phi", "must be at least 1");
  require(steps_per_period > 0.0, "steps_per_period", "must be positive");
  require(rel_tol > 0.0, "rel_tol", "must be positive");
  require(abs_tol_sigma > 0.0, "abs_tol_sigma", "must be positive");
  require(record_stride >= 1, "record_stride", "must be at least 1");
  require(std::isfinite(x0), "x0", "must be finite");
  require(std::isfinite(v0), "v0", "must be finite");
  require(n_particles >= 1, "n_particles", "must be at least 1");
  require(!sweep_n_omega.empty(), "sweep_n_omega", "must not be empty");
  for (std::size_t i = 0; i < sweep_n_omega.size(); ++i) {
    require(sweep_n_omega[i] >= 2, "sweep_n_omega", "entries must be at least 2");
    require(i == 0 || sweep_n_omega[i] > sweep_n_omega[i - 1], "sweep_n_omega",
            "must be strictly increasing");
  }
  require(transient_factor >= 0.0, "transient_factor", "must be non-negative");
  require(ensemble_coherence_factor >= 0.0, "ensemble_coherence_factor", "must be non-negative");
  require(amplitude_spacing >= 1.0, "amplitude_spacing", "must be at least one coherence time");
  require(separation_ratio > 0.0, "separation_ratio", "must be positive");
  require(max_resonance_ratio > 0.0, "max_resonance_ratio", "must be positive");
  require(max_bandwidth_ratio > 0.0, "max_bandwidth_ratio", "must be positive");
  for (unsigned w : bench_workers) require(w >= 1, "bench_workers", "entries must be at least 1");
  require(sigma_tolerance > 0.0, "sigma_tolerance", "must be positive");
  require(product_tolerance > 0.0, "product_tolerance", "must be positive");
  require(energy_tolerance > 0.0, "energy_tolerance", "must be positive");
  require(kurtosis_tolerance > 0.0, "kurtosis_tolerance", "must be positive");
  require(tv_threshold > 0.0, "tv_threshold", "must be positive");
  require(!output_dir.empty(), "output_dir", "must not be empty");
  require(workers >= 1, "workers", "must be at least 1");
  try {
    (void)oscillator();
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("key 'mass_me_multiple'/'charge_e': ") + e.what());
  }
}

RunConfig parse_config_string(std::string_view text, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  RunConfig cfg;
  if (root.IsNull()) {
    cfg.validate();
    return cfg;
  }
  if (!root.IsMap()) throw ConfigError(std::string(source) + ": expected a key: value mapping");

  std::map<std::string, const Field*> lookup;
  for (const auto& [name, f] : fields()) lookup[name] = &f;
  std::set<std::string> seen;
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const auto it = lookup.find(key);
    if (it == lookup.end()) fail(source, kv.first.Mark(), key, "unknown key");
    if (!seen.insert(key).second) fail(source, kv.first.Mark(), key, "duplicate key");
    if (!kv.second.IsScalar() && !kv.second.IsSequence()) {
      fail(source, kv.second.Mark(), key, "expected a scalar or a flat list");
    }
    try {
      it->second->read(cfg, kv.second);
    } catch (const YAML::Exception&) {
      fail(source, kv.second.Mark(), key, "cannot convert '" + YAML::Dump(kv.second) + "'");
    } catch (const std::invalid_argument& e) {
      fail(source, kv.second.Mark(), key, e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // Attach the line of the offending key when it was given explicitly.
    const std::string msg = e.what();
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      if (msg.find("'" + key + "'") != std::string::npos) {
        std::ostringstream os;
        os << source << ":" << kv.first.Mark().line + 1 << ": " << msg;
        throw ConfigError(os.str());
      }
    }
    throw ConfigError(std::string(source) + ": " + msg);
  }
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_string(buf.str(), path.string());
}

std::string echo_config(const RunConfig& cfg) {
  std::string out = "# effective configuration\n";
  for (const auto& [name, f] : fields()) {
    std::string value = f.write(cfg);
    if (name == "output_dir" || name == "scheme") value = YAML::Dump(YAML::Node(value));
    out += name + ": " + value + "\n";
  }
  return out;
}

}  // namespace sedsim
