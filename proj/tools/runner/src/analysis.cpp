#include <algorithm>
#include <stdexcept>

#include "polarisim/runner.hpp"
#include "polarisim/units.hpp"

namespace polarisim::runner {

ExpFit fit_frohlich(const EnsembleResult& r, double t_start, double t_end) {
  const auto rel = r.in_relative();
  std::vector<double> t, y;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    if (r.times[i] < t_start - 1e-9 || r.times[i] > t_end + 1e-9 || !rel[i]) continue;
    t.push_back(units::to_ps(r.times[i]));
    y.push_back(*rel[i]);
  }
  return fit_exponential(t, y);
}

RateFit fit_band_rates(const EnsembleResult& r, int n_layers, double t_end) {
  std::vector<double> t;
  for (std::size_t i = 0; i < r.times.size() && r.times[i] <= t_end + 1e-9; ++i) {
    t.push_back(units::to_ps(r.times[i]));
  }
  Eigen::Matrix3Xd pops(3, t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    pops.col(static_cast<Eigen::Index>(i)) << r.pop_upper[i], r.pop_dark[i], r.pop_lower[i];
  }
  return fit_rate_matrix(t, pops, {.dark_states = n_layers > 1});
}

std::vector<FrohlichRow> frohlich_table(const std::vector<int>& layers,
                                        const std::vector<EnsembleResult>& runs,
                                        const ModelParameters& p, double t_end) {
  if (layers.empty() || layers.size() != runs.size()) {
    throw std::invalid_argument("frohlich_table: need one run per layer count");
  }
  std::vector<FrohlichRow> rows;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    FrohlichRow row;
    row.n_layers = layers[i];
    row.layer_factor = layer_factor_for(layers[i], p);
    row.fit = fit_frohlich(runs[i], p.frohlich_fit_start, t_end);
    rows.push_back(row);
  }
  const double a_fs = rows.front().fit.K / rows.front().layer_factor;
  for (auto& row : rows) row.k_fs_theory = a_fs * row.layer_factor;
  return rows;
}

RatesTable rates_table(const std::vector<int>& layers, const std::vector<EnsembleResult>& runs,
                       const ModelParameters& p, double t_end) {
  if (layers.empty() || layers.size() != runs.size()) {
    throw std::invalid_argument("rates_table: need one run per layer count");
  }
  RatesTable table;
  std::vector<double> k_ud;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    RatesRow row;
    row.n_layers = layers[i];
    row.layer_factor = layer_factor_for(layers[i], p);
    row.fit = fit_band_rates(runs[i], layers[i], t_end);
    if (layers[i] > 1) row.k_dl = row.fit.rates.k_DL;
    k_ud.push_back(row.fit.rates.k_UD);
    table.rows.push_back(row);
  }

  auto& a = table.prefactors;
  a.a_ul = table.rows.front().fit.rates.k_UL / table.rows.front().layer_factor;
  for (const auto& row : table.rows) {
    if (row.k_dl) {
      a.a_dl = *row.k_dl / row.layer_factor;
      table.dl_anchor_layers = row.n_layers;
      break;
    }
  }
  a.a_ud = fit_ud_prefactor(layers, k_ud, p);
  for (auto& row : table.rows) row.theory = scaling_laws(row.n_layers, p, a);
  return table;
}

std::vector<EnsembleResult> run_layer_scan(const ModelParameters& p, int threads) {
  if (p.layer_list.empty()) throw std::invalid_argument("layer_list is empty");
  std::vector<EnsembleResult> runs;
  for (int n : p.layer_list) {
    ModelParameters q = p;
    q.n_layers = n;
    validate(q);
    runs.push_back(run_ensemble(Model(q), threads));
  }
  return runs;
}

}  // namespace polarisim::runner
