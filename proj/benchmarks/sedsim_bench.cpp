#include <benchmark/benchmark.h>

#include "sedsim/config.hpp"
#include "sedsim/dynamics.hpp"
#include "sedsim/runner.hpp"
#include "sedsim/vacuum_field.hpp"

namespace {

sedsim::RunConfig desk(unsigned n_omega) {
  sedsim::RunConfig cfg;
  cfg.n_omega = n_omega;
  return cfg;
}

void BM_FieldNaive(benchmark::State& state) {
  const auto cfg = desk(static_cast<unsigned>(state.range(0)));
  const auto modes = sedsim::sample_modes(cfg.oscillator(), cfg.field());
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sedsim::field_x_dipole(modes, t));
    t += 1e-17;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FieldNaive)->Arg(500)->Arg(2000);

void BM_FieldEvaluator(benchmark::State& state) {
  const auto cfg = desk(static_cast<unsigned>(state.range(0)));
  const auto modes = sedsim::sample_modes(cfg.oscillator(), cfg.field());
  const sedsim::FieldEvaluator field(modes);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field(t));
    t += 1e-17;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FieldEvaluator)->Arg(500)->Arg(2000);

// One natural period is twenty steps at the default step size.
void BM_IntegratorPeriod(benchmark::State& state) {
  const auto cfg = desk(static_cast<unsigned>(state.range(0)));
  const auto params = cfg.oscillator();
  const auto modes = sedsim::sample_modes(params, cfg.field());
  sedsim::Integrator integ(params, modes, cfg.integrator());
  integ.reset(0.0, 0.0, 0.0);
  const double period = params.natural_period();
  double t = 0.0;
  for (auto _ : state) {
    t += period;
    integ.advance_to(t);
  }
  state.SetItemsProcessed(state.iterations() * 20);
}
BENCHMARK(BM_IntegratorPeriod)->Arg(500)->Arg(2000);

void BM_EnsembleMember(benchmark::State& state) {
  auto cfg = desk(500);
  cfg.n_particles = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sedsim::run_ensemble(cfg).summary.mean_energy);
  }
}
BENCHMARK(BM_EnsembleMember)->Unit(benchmark::kMillisecond);

void BM_SequentialDesk(benchmark::State& state) {
  const auto cfg = desk(2000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sedsim::run_sequential(cfg).analysis.summary.sigma_x);
  }
}
BENCHMARK(BM_SequentialDesk)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
