#include <benchmark/benchmark.h>

#include "polarisim/observables.hpp"
#include "polarisim/oracle.hpp"
#include "polarisim/propagator.hpp"

namespace {

using namespace polarisim;

ModelParameters lattice(int sites, int layers) {
  ModelParameters p = default_parameters();
  p.n_sites = sites;
  p.n_layers = layers;
  p.n_steps = 10;
  p.snapshot_times = {0.0};
  p.record_interval = p.dt;
  return p;
}

void BM_EhrenfestStep(benchmark::State& state) {
  const auto p = lattice(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const Model m(p);
  auto psi = prepare_initial_state(m).state;
  auto ph = sample_thermal(p, p.seed);
  SplitPropagator prop(m);
  for (auto _ : state) {
    prop.advance(psi, ph, 1);
    benchmark::DoNotOptimize(psi.b.data());
  }
  state.SetItemsProcessed(state.iterations() * p.n_sites * p.n_layers);
}
BENCHMARK(BM_EhrenfestStep)->ArgsProduct({{1024, 4096}, {1, 5, 15}});

void BM_EnvPhase(benchmark::State& state) {
  const auto p = lattice(static_cast<int>(state.range(0)), 5);
  const Model m(p);
  auto psi = prepare_initial_state(m).state;
  const auto ph = sample_thermal(p, p.seed);
  SplitPropagator prop(m);
  for (auto _ : state) {
    prop.apply_env_phase(psi, ph, p.dt);
    benchmark::DoNotOptimize(psi.b.data());
  }
}
BENCHMARK(BM_EnvPhase)->Arg(1024)->Arg(4096);

void BM_PolaritonStep(benchmark::State& state) {
  const auto p = lattice(static_cast<int>(state.range(0)), 5);
  const Model m(p);
  auto psi = prepare_initial_state(m).state;
  SplitPropagator prop(m);
  for (auto _ : state) {
    prop.apply_polariton_step(psi, p.dt);
    benchmark::DoNotOptimize(psi.b.data());
  }
}
BENCHMARK(BM_PolaritonStep)->Arg(1024)->Arg(4096);

void BM_BandPopulations(benchmark::State& state) {
  const auto p = lattice(static_cast<int>(state.range(0)), 5);
  const Model m(p);
  const auto psi = prepare_initial_state(m).state;
  for (auto _ : state) benchmark::DoNotOptimize(band_populations(psi, m));
}
BENCHMARK(BM_BandPopulations)->Arg(1024)->Arg(4096);

void BM_DenseReference(benchmark::State& state) {
  const auto p = lattice(static_cast<int>(state.range(0)), 2);
  const Model m(p);
  const auto ph = sample_thermal(p, p.seed);
  for (auto _ : state) benchmark::DoNotOptimize(DensePropagator(build_dense(m, ph)));
}
BENCHMARK(BM_DenseReference)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
