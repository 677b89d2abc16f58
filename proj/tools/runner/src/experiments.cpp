#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "polarisim/runner.hpp"
#include "polarisim/units.hpp"

namespace polarisim::runner {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void write_json(const fs::path& file, const json& j) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

// json cannot hold NaN; missing numbers become null
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string snapshot_name(double t_au) {
  const double t = units::to_fs(t_au);
  char buf[48];
  if (std::abs(t - std::round(t)) < 1e-6) {
    std::snprintf(buf, sizeof buf, "kres_%ldfs.csv", std::lround(t));
  } else {
    std::snprintf(buf, sizeof buf, "kres_%.6gfs.csv", t);
  }
  return buf;
}

fs::path layer_dir(const fs::path& root, int n_layers) {
  return root / ("layers_" + std::to_string(n_layers));
}

ModelParameters with_layers(ModelParameters p, int n) {
  p.n_layers = n;
  return p;
}

}  // namespace

void write_meta(const fs::path& dir, const ExperimentSpec& spec) {
  json j;
  j["experiment"] = spec.kind;
  j["version"] = POLARISIM_VERSION;
  j["seed"] = spec.params.seed;
  j["overrides"] = spec.overrides;
  json cfg = json::object();
  const auto doc = to_document(spec.params);
  for (const auto& [k, v] : doc) cfg[k] = v;
  j["config"] = cfg;
  j["config_text"] = to_text(doc);
  write_json(dir / "meta.json", j);
}

void write_relax(const fs::path& dir, const Model& model, const EnsembleResult& r) {
  fs::create_directories(dir);
  {
    CsvWriter csv(dir / "populations.csv",
                  {"t_fs", "P_up", "P_dark", "P_low", "P_in", "P_out", "P_in_rel"});
    const auto rel = r.in_relative();
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      csv.row(units::to_fs(r.times[i]), r.pop_upper[i], r.pop_dark[i], r.pop_lower[i], r.p_in[i],
              r.p_out[i], rel[i]);
    }
  }
  const auto& g = model.geometry;
  const auto& b = model.basis;
  for (const auto& snap : r.snapshots) {
    CsvWriter csv(dir / snapshot_name(snap.requested_time), {"k", "E_up", "E_low", "P_up_k", "P_low_k"});
    for (int i = 0; i < g.n_sites; ++i) {
      csv.row(g.k_units(i), units::to_ev(b.e_upper[i]), units::to_ev(b.e_lower[i]),
              snap.p_upper_k[i], snap.p_lower_k[i]);
    }
  }
  json s;
  s["n_trajectories"] = r.n_trajectories;
  s["k_bar"] = r.k_bar / g.dk();
  s["window_center"] = r.window.k_center / g.dk();
  s["window_halfwidth"] = r.window.halfwidth / g.dk();
  s["initial_mean_energy_ev"] = units::to_ev(r.initial_mean_energy);
  s["max_norm_error"] = r.max_norm_error;
  s["max_completeness_error"] = r.max_completeness_error;
  write_json(dir / "summary.json", s);
}

void write_transfer(const fs::path& dir, const Model& model, const TransferMatrices& t,
                    const DisorderFactor& disorder) {
  fs::create_directories(dir);
  const auto& g = model.geometry;
  auto dump = [&](const char* name, const Eigen::MatrixXcd& m) {
    CsvWriter csv(dir / name, {"k_up", "k_low", "re", "im", "abs"});
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        csv.row(g.k_units(t.k_subgrid[i]), g.k_units(t.k_subgrid[j]), m(i, j).real(),
                m(i, j).imag(), std::abs(m(i, j)));
      }
    }
  };
  dump("order1.csv", t.order1);
  dump("order2.csv", t.order2);
  dump("full.csv", t.full);

  const auto s = summarize(t);
  json j;
  j["delta_t_au"] = t.delta_t;
  j["ensemble_size"] = t.ensemble_size;
  j["k_points"] = t.k_subgrid.size();
  j["norm_order1"] = s.norm_order1;
  j["norm_order2"] = s.norm_order2;
  j["norm_full"] = s.norm_full;
  j["order1_over_order2"] = number(s.order1_over_order2);
  j["mean_diagonal_full"] = s.mean_diagonal_full;
  j["max_offdiagonal_full"] = s.max_offdiagonal_full;
  j["offdiag_over_diag"] = number(s.offdiag_over_diag);
  j["disorder_factor_re"] = disorder.factor.real();
  j["disorder_factor_im"] = disorder.factor.imag();
  j["mean_q2"] = disorder.mean_q2;
  j["disorder_order2_prediction"] = disorder.order2_prediction;
  j["classical_order2_prediction"] = classical_disorder_prediction(model.params, t.delta_t);
  write_json(dir / "vertical_summary.json", j);
}

void write_frohlich(const fs::path& file, const std::vector<FrohlichRow>& rows) {
  CsvWriter csv(file, {"N_L", "K_FS_fit", "K_FS_theory", "layer_factor", "a", "b", "non_decaying"});
  for (const auto& r : rows) {
    csv.row(r.n_layers, r.fit.K, r.k_fs_theory, r.layer_factor, r.fit.a, r.fit.b,
            r.fit.non_decaying ? 1 : 0);
  }
}

void write_rates(const fs::path& file, const RatesTable& table) {
  CsvWriter csv(file, {"N_L", "k_UL", "k_UD", "k_DL", "k_UL_theory", "k_UD_theory", "k_DL_theory",
                       "k_DU", "k_LU", "k_LD", "layer_factor", "residual"});
  for (const auto& r : table.rows) {
    const auto& k = r.fit.rates;
    const bool dark = r.n_layers > 1;
    const std::optional<double> none;
    csv.row(r.n_layers, k.k_UL, k.k_UD, r.k_dl, r.theory.k_ul, r.theory.k_ud,
            dark ? std::optional<double>(r.theory.k_dl) : none,
            dark ? std::optional<double>(k.k_DU) : none, k.k_LU,
            dark ? std::optional<double>(k.k_LD) : none, r.layer_factor, r.fit.residual);
  }
}

int cmd_relax(const ExperimentSpec& spec) {
  const Model model(spec.params);
  const auto r = run_ensemble(model, spec.threads);
  write_relax(spec.output_dir, model, r);
  write_meta(spec.output_dir, spec);
  std::printf("relax: N=%d N_L=%d trajectories=%d  P_up=%.4f P_dark=%.4f P_low=%.4f at %.1f fs\n",
              spec.params.n_sites, spec.params.n_layers, r.n_trajectories, r.pop_upper.back(),
              r.pop_dark.back(), r.pop_lower.back(), units::to_fs(r.times.back()));
  return 0;
}

int cmd_vertical(const ExperimentSpec& spec) {
  const auto& p = spec.params;
  const Model model(p);
  std::vector<PhononState> ensemble;
  ensemble.reserve(p.analyzer_ensemble);
  for (int t = 0; t < p.analyzer_ensemble; ++t) {
    ensemble.push_back(sample_phonons(p, p.sampling_mode, p.seed, static_cast<std::uint64_t>(t)));
  }
  const auto k = default_k_subgrid(model, p.analyzer_k_points);
  const auto t = vertical_transfer_matrices(model, ensemble, p.analyzer_dt, k);
  const auto d = phonon_disorder_factor(ensemble, p.gamma, p.analyzer_dt);
  fs::create_directories(spec.output_dir);
  write_transfer(spec.output_dir, model, t, d);
  write_meta(spec.output_dir, spec);
  const auto s = summarize(t);
  std::printf("vertical: |order1|/|order2| = %.4g  max offdiag / mean diag = %.4g\n",
              s.order1_over_order2, s.offdiag_over_diag);
  return 0;
}

int cmd_frohlich_scan(const ExperimentSpec& spec) {
  const auto& p = spec.params;
  const auto runs = run_layer_scan(p, spec.threads);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const int n = p.layer_list[i];
    write_relax(layer_dir(spec.output_dir, n), Model(with_layers(p, n)), runs[i]);
  }
  const auto rows = frohlich_table(p.layer_list, runs, p, p.duration());
  write_frohlich(spec.output_dir / "kfs_vs_layers.csv", rows);
  write_meta(spec.output_dir, spec);
  for (const auto& r : rows) {
    std::printf("N_L=%2d  K_FS fit %.4g ps^-1  theory %.4g ps^-1\n", r.n_layers, r.fit.K,
                r.k_fs_theory);
  }
  return 0;
}

int cmd_rates_scan(const ExperimentSpec& spec) {
  const auto& p = spec.params;
  const auto runs = run_layer_scan(p, spec.threads);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const int n = p.layer_list[i];
    write_relax(layer_dir(spec.output_dir, n), Model(with_layers(p, n)), runs[i]);
  }
  const auto table = rates_table(p.layer_list, runs, p, p.duration());
  write_rates(spec.output_dir / "rates_vs_layers.csv", table);
  json j;
  j["A_UL"] = table.prefactors.a_ul;
  j["A_UD"] = table.prefactors.a_ud;
  j["A_DL"] = table.prefactors.a_dl;
  j["A_DL_anchor_layers"] = table.dl_anchor_layers;
  j["rate_unit"] = "ps^-1";
  write_json(spec.output_dir / "prefactors.json", j);
  write_meta(spec.output_dir, spec);
  for (const auto& r : table.rows) {
    std::printf("N_L=%2d  k_UL %.4g  k_UD %.4g  k_DL %s ps^-1\n", r.n_layers, r.fit.rates.k_UL,
                r.fit.rates.k_UD, r.k_dl ? format_value(*r.k_dl).c_str() : "-");
  }
  return 0;
}

int cmd_sync_test(const ExperimentSpec& spec) {
  const auto& p = spec.params;
  fs::create_directories(spec.output_dir);
  CsvWriter csv(spec.output_dir / "sync_kfs.csv",
                {"mode", "N_L", "K_FS_fit", "a", "b", "non_decaying"});
  for (SamplingMode mode : {SamplingMode::independent, SamplingMode::synchronized}) {
    ModelParameters q = p;
    q.sampling_mode = mode;
    const Model model(q);
    const auto r = run_ensemble(model, spec.threads);
    write_relax(spec.output_dir / std::string(to_string(mode)), model, r);
    const auto fit = fit_frohlich(r, p.frohlich_fit_start, p.duration());
    csv.row(std::string(to_string(mode)), p.n_layers, fit.K, fit.a, fit.b, fit.non_decaying ? 1 : 0);
    std::printf("%-13s N_L=%d  K_FS %.4g ps^-1\n", std::string(to_string(mode)).c_str(),
                p.n_layers, fit.K);
  }
  write_meta(spec.output_dir, spec);
  return 0;
}

int run_experiment(const ExperimentSpec& spec) {
  if (spec.kind == "relax") return cmd_relax(spec);
  if (spec.kind == "vertical") return cmd_vertical(spec);
  if (spec.kind == "frohlich-scan") return cmd_frohlich_scan(spec);
  if (spec.kind == "rates-scan") return cmd_rates_scan(spec);
  if (spec.kind == "sync-test") return cmd_sync_test(spec);
  if (spec.kind == "verify") return cmd_verify(spec);
  throw std::invalid_argument("unknown experiment '" + spec.kind + "'");
}

}  // namespace polarisim::runner
