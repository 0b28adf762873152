#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sedsim/config.hpp"
#include "sedsim/error.hpp"
#include "sedsim/io.hpp"
#include "support.hpp"

namespace sedsim {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(SEDSIM_TEST_TMPDIR) / "config_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string error_of(std::string_view text) {
  try {
    parse_config_string(text, "cfg.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, EmptyDocumentGivesDefaults) {
  EXPECT_EQ(parse_config_string(""), RunConfig{});
}

TEST(Config, MinimalFileFillsDefaults) {
  const auto cfg = parse_config_string("n_omega: 500\nseed: 42\nexperiment: ensemble\n");
  RunConfig expected;
  expected.n_omega = 500;
  expected.seed = 42;
  expected.experiment = Experiment::kEnsemble;
  EXPECT_EQ(cfg, expected);
}

TEST(Config, UnknownKeyRejectedWithLine) {
  const auto msg = error_of("seed: 1\nn_omgea: 10\n");
  EXPECT_NE(msg.find("cfg.yaml:2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("n_omgea"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key"), std::string::npos) << msg;
}

TEST(Config, InvalidValuesNameTheKey) {
  auto msg = error_of("seed: 3\nmass_me_multiple: -1\n");
  EXPECT_NE(msg.find("mass_me_multiple"), std::string::npos) << msg;
  EXPECT_NE(msg.find(":2"), std::string::npos) << msg;
  msg = error_of("n_omega: many\n");
  EXPECT_NE(msg.find("n_omega"), std::string::npos) << msg;
  msg = error_of("experiment: parallel\n");
  EXPECT_NE(msg.find("experiment"), std::string::npos) << msg;
  msg = error_of("seed: 1\nseed: 2\n");
  EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
  EXPECT_THROW(parse_config_string("- a\n- b\n"), ConfigError);
  EXPECT_THROW(parse_config_string("seed: [1\n"), ConfigError);
  EXPECT_THROW(parse_config(scratch("missing.yaml")), ConfigError);
}

TEST(Config, EchoRoundTripsDefaults) {
  const RunConfig cfg;
  EXPECT_EQ(parse_config_string(echo_config(cfg)), cfg);
}

TEST(Config, EchoRoundTripsEveryField) {
  RunConfig cfg;
  cfg.charge_e = 0.75;
  cfg.mass_me_multiple = 3.3e-4;
  cfg.omega0 = 2.0000000000000004e16;
  cfg.delta_over_resonance_width = 123.456789;
  cfg.n_omega = 77;
  cfg.scheme = "spherical";
  cfg.n_theta = 7;
  cfg.n_phi = 9;
  cfg.shared_phi_offset = true;
  cfg.seed = 18446744073709551557ULL;
  cfg.steps_per_period = 31.5;
  cfg.rel_tol = 1.2345678901234567e-7;
  cfg.record_stride = 3;
  cfg.x0 = -1.5e-9;
  cfg.v0 = 0.1;
  cfg.damping = false;
  cfg.experiment = Experiment::kSweep;
  cfg.n_particles = 12;
  cfg.sweep_n_omega = {10, 20};
  cfg.bench_workers = {1, 3};
  cfg.tv_threshold = 0.07;
  cfg.output_dir = "out dir/with: colon";
  cfg.workers = 5;
  ASSERT_NO_THROW(cfg.validate());
  const auto back = parse_config_string(echo_config(cfg));
  EXPECT_EQ(back, cfg);
  EXPECT_EQ(echo_config(back), echo_config(cfg));
}

// Random doubles survive the echo bit for bit.
TEST(Config, EchoPreservesDoublesExactly) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 200; ++i) {
    RunConfig cfg;
    cfg.x0 = std::pow(10.0, u(gen)) * (i % 2 ? 1 : -1);
    cfg.v0 = u(gen);
    EXPECT_EQ(parse_config_string(echo_config(cfg)), cfg);
  }
}

TEST(Config, FileRoundTrip) {
  RunConfig cfg;
  cfg.seed = 9;
  cfg.output_dir = "x";
  const auto path = scratch("echo.yaml");
  io::write_text(path, echo_config(cfg));
  EXPECT_EQ(parse_config(path), cfg);
}

TEST(Config, PaperDefaultsAreTheReferenceRegime) {
  const RunConfig cfg;
  const auto p = cfg.oscillator();
  EXPECT_NEAR(p.mass() / (1e-4 * test::C::electron_mass), 1.0, 1e-15);
  EXPECT_EQ(p.omega0(), 1e16);
  EXPECT_NEAR(cfg.field().delta / (220 * p.damping_rate()), 1.0, 1e-15);
  EXPECT_EQ(cfg.field().n_omega, 2000u);
}

TEST(Config, ShippedExamplesParse) {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(SEDSIM_CONFIG_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    const auto cfg = parse_config(entry.path());
    EXPECT_EQ(parse_config_string(echo_config(cfg)), cfg) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 5u);
}

TEST(TrajectoryCsv, RoundTripIsExact) {
  const auto p = test::paper_params();
  Trajectory t(p, true);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n(0.0, 1.0);
  double time = 0.0;
  for (int i = 0; i < 500; ++i) {
    time += 1e-17 * (1.0 + std::abs(n(gen)));
    t.append(time, 1e-8 * n(gen), 1e8 * n(gen));
  }
  const auto path = scratch("traj.csv");
  io::write_trajectory_csv(path, t);
  const auto back = io::read_trajectory_csv(path, p, true);
  ASSERT_EQ(back.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(back.times()[i], t.times()[i]);
    EXPECT_EQ(back.x()[i], t.x()[i]);
    EXPECT_EQ(back.v()[i], t.v()[i]);
  }
}

TEST(TrajectoryCsv, RejectsMalformedInput) {
  const auto p = test::paper_params();
  const auto path = scratch("bad.csv");
  io::write_text(path, "time,x,v\n0,0,0\n");
  EXPECT_THROW(io::read_trajectory_csv(path, p, true), Error);
  io::write_text(path, "t,x,v\n0,0\n");
  EXPECT_THROW(io::read_trajectory_csv(path, p, true), Error);
  EXPECT_THROW(io::read_trajectory_csv(scratch("nothing.csv"), p, true), Error);
}

TEST(HistogramCsv, RowsMatchHistogram) {
  auto h = Histogram::uniform(-1.0, 1.0, 4);
  for (double v : {-0.9, -0.1, 0.1, 0.2, 0.9}) h.add(v);
  const auto path = scratch("hist.csv");
  io::write_histogram_csv(path, h);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "lo,hi,count,density");
  const auto d = h.density();
  for (std::size_t i = 0; i < h.bins(); ++i) {
    ASSERT_TRUE(std::getline(in, line));
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    ASSERT_EQ(row.size(), 4u);
    EXPECT_EQ(row[0], h.edges()[i]);
    EXPECT_EQ(row[1], h.edges()[i + 1]);
    EXPECT_EQ(row[2], static_cast<double>(h.counts()[i]));
    EXPECT_DOUBLE_EQ(row[3], d[i]);
  }
  EXPECT_FALSE(std::getline(in, line));
}

TEST(Json, WindowsRoundTrip) {
  SimWindows w;
  w.tau_tran = 3.19e-13;
  w.tau_coh = 9.1e-15;
  w.tau_int = 1.04e-11;
  w.delta_omega_min = 2 * kPi / w.tau_int;
  const auto path = scratch("w.json");
  io::write_json(path, io::to_json(w));
  const auto back = io::windows_from_json(io::read_json(path));
  EXPECT_EQ(back.tau_tran, w.tau_tran);
  EXPECT_EQ(back.tau_coh, w.tau_coh);
  EXPECT_EQ(back.tau_int, w.tau_int);
  EXPECT_EQ(back.delta_omega_min, w.delta_omega_min);
}

TEST(Json, MalformedFileThrows) {
  const auto path = scratch("bad.json");
  io::write_text(path, "{\"a\": ");
  EXPECT_THROW(io::read_json(path), Error);
}

}  // namespace
}  // namespace sedsim
