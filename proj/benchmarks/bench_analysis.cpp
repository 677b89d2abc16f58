#include <benchmark/benchmark.h>

#include "polarisim/exp_fit.hpp"
#include "polarisim/kinetics.hpp"
#include "polarisim/vertical.hpp"

namespace {

using namespace polarisim;

std::vector<double> unit_grid(int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = double(i) / (n - 1);
  return t;
}

void BM_RateFit(benchmark::State& state) {
  const auto t = unit_grid(static_cast<int>(state.range(0)));
  const auto data = predict_populations({5.0, 3.0, 0.5, 2.0, 0.3, 0.2}, Eigen::Vector3d(1, 0, 0), t);
  for (auto _ : state) benchmark::DoNotOptimize(fit_rate_matrix(t, data));
}
BENCHMARK(BM_RateFit)->Arg(60)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ExpFit(benchmark::State& state) {
  const auto t = unit_grid(60);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) y[i] = 0.8 * std::exp(-5.0 * t[i]) + 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(fit_exponential(t, y));
}
BENCHMARK(BM_ExpFit);

void BM_TransferMatrices(benchmark::State& state) {
  ModelParameters p = default_parameters();
  p.n_sites = 2000;
  p.n_layers = 1;
  const Model m(p);
  std::vector<PhononState> ens;
  for (int i = 0; i < state.range(0); ++i) ens.push_back(sample_thermal(p, p.seed, i));
  const auto k = default_k_subgrid(m, 64);
  for (auto _ : state) benchmark::DoNotOptimize(vertical_transfer_matrices(m, ens, 50.0, k));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TransferMatrices)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
