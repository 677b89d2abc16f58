// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. Scan outputs are written to the
// directory given as the first argument (default: acceptance_out).

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "polarisim/oracle.hpp"
#include "polarisim/rng.hpp"
#include "polarisim/runner.hpp"
#include "polarisim/units.hpp"

using namespace polarisim;
namespace fs = std::filesystem;

namespace {

// tolerances
constexpr double kOracleError = 1e-8;
constexpr double kOracleSeconds = 10.0;
constexpr double kNormDrift = 1e-10;
constexpr double kCompleteness = 1e-8;
constexpr double kSpectrum = 1e-10;
constexpr double kRabiEv = 1e-6;
constexpr double kVariance = 0.05;
constexpr int kVarianceDraws = 10000;
constexpr double kFirstOverSecond = 0.05;
constexpr double kOffdiagOverDiag = 0.1;
constexpr double kVerticalFraction = 0.80;
constexpr double kFrohlichScaling = 0.25;
constexpr double kSyncMatch = 0.25;
constexpr double kRateLaw = 0.30;
constexpr double kFitExact = 0.01;
constexpr double kFitNoisy = 0.10;
constexpr double kNoise = 0.01;

struct Outcome {
  int id;
  std::string name;
  bool passed;
  std::string detail;
};

std::vector<Outcome> g_outcomes;

void report(int id, std::string name, bool passed, std::string detail) {
  std::printf("[%s] criterion %d %s: %s\n", passed ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  g_outcomes.push_back({id, std::move(name), passed, std::move(detail)});
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note(const std::string& s) {
  std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

WaveState random_state(int sites, int layers, std::uint64_t seed) {
  WaveState psi(sites, layers);
  const Philox4x32 gen(seed);
  std::uint32_t i = 0;
  auto draw = [&] {
    const auto [a, b] = normal_pair(gen({i++, 0xacc0u, 0, 0}));
    return cplx(a, b);
  };
  for (auto& x : psi.c) x = draw();
  for (auto& x : psi.b) x = draw();
  const double s = 1.0 / std::sqrt(psi.norm2());
  for (auto& x : psi.c) x *= s;
  for (auto& x : psi.b) x *= s;
  return psi;
}

double variance(const std::vector<double>& x) {
  double m = 0.0, m2 = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double v : x) m2 += (v - m) * (v - m);
  return m2 / static_cast<double>(x.size() - 1);
}

ModelParameters lattice(int sites, int layers) {
  ModelParameters p = default_parameters();
  p.n_sites = sites;
  p.n_layers = layers;
  return p;
}

// 1. split-operator against the dense exponential with frozen thermal phonons
void oracle_equivalence() {
  auto p = lattice(8, 2);
  p.dt = 1.0;
  p.n_steps = 100;
  p.snapshot_times = {0.0};
  p.record_interval = p.dt;
  const auto t0 = std::chrono::steady_clock::now();
  const Model m(p);
  const auto ph = sample_thermal(p, p.seed);
  const auto psi0 = random_state(8, 2, p.seed);
  const auto h = build_dense(m, ph);
  const auto ref = dense_propagate(psi0, h, p.dt * p.n_steps);
  auto psi = psi0;
  SplitPropagator(m).advance_frozen(psi, ph, p.n_steps, p.dt);
  double err = 0.0;
  for (std::size_t i = 0; i < psi.c.size(); ++i) err = std::max(err, std::abs(psi.c[i] - ref.c[i]));
  for (std::size_t i = 0; i < psi.b.size(); ++i) err = std::max(err, std::abs(psi.b[i] - ref.b[i]));
  const double secs = seconds_since(t0);

  // step-size study over the same interval, for the log
  std::string study;
  for (double dt : {0.5, 0.25, 0.125, 0.0625}) {
    const int steps = static_cast<int>(std::lround(100.0 / dt));
    auto x = psi0;
    SplitPropagator(m).advance_frozen(x, ph, steps, dt);
    double e = 0.0;
    for (std::size_t i = 0; i < x.c.size(); ++i) e = std::max(e, std::abs(x.c[i] - ref.c[i]));
    for (std::size_t i = 0; i < x.b.size(); ++i) e = std::max(e, std::abs(x.b[i] - ref.b[i]));
    study += fmt(" dt=%g:%.2e", dt, e);
  }
  note("splitting error vs dt:" + study);
  report(1, "oracle equivalence", err < kOracleError && secs < kOracleSeconds,
         fmt("max amplitude error %.3e (limit %.0e), %.2f s (limit %.0f s)", err, kOracleError,
             secs, kOracleSeconds));
}

// 2. norm and completeness through a full relax run
void unitarity(int threads) {
  auto p = lattice(256, 5);
  p.n_trajectories = 100;
  p.n_steps = static_cast<int>(std::ceil(units::ps(0.3) / p.dt - 1e-9));
  p.excitation_center_energy = units::ev(3.6);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_ensemble(Model(p), threads);
  const double per_1000 = r.max_norm_error;  // worst over a 1241-step run
  report(2, "unitarity and completeness",
         per_1000 < kNormDrift && r.max_completeness_error < kCompleteness,
         fmt("norm drift %.2e (limit %.0e), completeness %.2e (limit %.0e), %d trajectories in "
             "%.0f s",
             per_1000, kNormDrift, r.max_completeness_error, kCompleteness, r.n_trajectories,
             seconds_since(t0)));
}

// 3. gamma = 0 spectrum and the Rabi splitting at resonance
void eigenstructure() {
  double worst = 0.0;
  for (int nl : {1, 2, 3}) {
    const Model m(lattice(8, nl));
    const auto h = build_dense(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix, Eigen::EigenvaluesOnly);
    std::vector<double> expect;
    for (int i = 0; i < m.basis.size(); ++i) {
      expect.push_back(m.basis.e_upper[i]);
      expect.push_back(m.basis.e_lower[i]);
      for (int d = 0; d < m.dark.n_dark(); ++d) expect.push_back(m.basis.epsilon_k[i]);
    }
    std::sort(expect.begin(), expect.end());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      worst = std::max(worst, std::abs(es.eigenvalues()(static_cast<Eigen::Index>(i)) - expect[i]));
    }
  }

  // tune eps0 so the k = 0 photon is resonant; the two dense eigenstates with
  // k = 0 photon weight give the splitting without using the polariton basis
  std::vector<double> gaps;
  double worst_rabi = 0.0;
  for (int nl : {1, 2, 3, 5, 10}) {
    auto p = lattice(8, nl);
    const Model probe(p);
    const int k0 = probe.geometry.grid_index_of_units(0);
    p.epsilon0 = probe.basis.omega_k[k0] + 2 * p.tau;
    const Model m(p);
    const auto h = build_dense(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix);
    std::vector<double> e;
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
      if (std::norm(es.eigenvectors()(h.photon_index(k0), j)) > 0.1) e.push_back(es.eigenvalues()(j));
    }
    if (e.size() != 2) {
      worst_rabi = INFINITY;
      continue;
    }
    const double gap = units::to_ev(std::abs(e[1] - e[0]));
    const double expect = units::to_ev(2 * std::sqrt(m.weights.S) * m.basis.omega_coupling_k[k0]);
    worst_rabi = std::max(worst_rabi, std::abs(gap - expect));
    gaps.push_back(gap);
  }
  const auto [lo, hi] = std::minmax_element(gaps.begin(), gaps.end());
  const double spread = gaps.empty() ? INFINITY : *hi - *lo;
  report(3, "eigenstructure", worst < kSpectrum && worst_rabi < kRabiEv && spread < kRabiEv,
         fmt("spectrum error %.2e Ha (limit %.0e), Rabi gap %.6f eV, error %.2e eV, spread over "
             "N_L %.2e eV (limit %.0e)",
             worst, kSpectrum, gaps.empty() ? 0.0 : gaps.front(), worst_rabi, spread, kRabiEv));
}

// 4. variance of the layer-averaged displacement
void phonon_variance() {
  bool ok = true;
  std::string detail;
  for (int nl : {1, 2, 5, 10}) {
    const auto p = lattice(16, nl);
    const Model m(p);
    const double var_q = thermal_moments(p).var_q;
    for (SamplingMode mode : {SamplingMode::independent, SamplingMode::synchronized}) {
      std::vector<double> qbar;
      for (int t = 0; t < kVarianceDraws; ++t) {
        const auto s = sample_phonons(p, mode, p.seed, static_cast<std::uint64_t>(t));
        const auto q = layer_averaged_fluctuation(s, m.weights);
        qbar.insert(qbar.end(), q.begin(), q.end());
      }
      const double expect =
          mode == SamplingMode::independent ? var_q * layer_factor(m.weights) : var_q;
      const double rel = variance(qbar) / expect - 1.0;
      ok = ok && std::abs(rel) < kVariance;
      detail += fmt("%s%d:%+.3f ", mode == SamplingMode::independent ? "ind" : "sync", nl, rel);
    }
  }
  report(4, "phonon variance law", ok,
         fmt("relative deviation %s(limit %.2f, %d draws)", detail.c_str(), kVariance,
             kVarianceDraws));
}

// 5. transfer matrix structure at N = 2000
void vertical_analysis(const fs::path& out) {
  auto p = lattice(2000, 1);
  p.analyzer_dt = 50.0;
  p.analyzer_ensemble = 1000;
  const Model m(p);
  std::vector<PhononState> ens;
  for (int t = 0; t < p.analyzer_ensemble; ++t) ens.push_back(sample_thermal(p, p.seed, t));
  const auto k = default_k_subgrid(m, p.analyzer_k_points);
  const auto t = vertical_transfer_matrices(m, ens, p.analyzer_dt, k);
  runner::write_transfer(out / "vertical", m, t, phonon_disorder_factor(ens, p.gamma, p.analyzer_dt));
  const auto s = summarize(t);
  note(fmt("largest |order1| element / largest |order2| element: %.4f",
           t.magnitude1().maxCoeff() / t.magnitude2().maxCoeff()));
  report(5, "vertical transfer matrices",
         s.order1_over_order2 < kFirstOverSecond && s.offdiag_over_diag < kOffdiagOverDiag,
         fmt("|order1|/|order2| %.4f (limit %.2f), max offdiag / mean diag %.4f (limit %.1f)",
             s.order1_over_order2, kFirstOverSecond, s.offdiag_over_diag, kOffdiagOverDiag));
}

// 6. LP population inside the excitation window at 10 fs for one layer
void vertical_dynamics(const EnsembleResult& single_layer) {
  const double t_target = units::fs(10.0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < single_layer.times.size(); ++i) {
    if (std::abs(single_layer.times[i] - t_target) <
        std::abs(single_layer.times[idx] - t_target)) {
      idx = i;
    }
  }
  const auto rel = single_layer.in_relative()[idx];
  const double frac = rel.value_or(0.0);
  report(6, "vertical relaxation in dynamics", rel && frac >= kVerticalFraction,
         fmt("LP fraction in k_bar +- 5 at %.2f fs: %.4f (limit %.2f), P_low %.3e",
             units::to_fs(single_layer.times[idx]), frac, kVerticalFraction,
             single_layer.pop_lower[idx]));
}

// 7. K_FS against the layer factor
void frohlich_scaling(const std::vector<runner::FrohlichRow>& rows) {
  bool ok = true;
  std::string detail;
  const double k1 = rows.front().fit.K;
  for (const auto& r : rows) {
    if (r.n_layers == 2 || r.n_layers == 5 || r.n_layers == 10) {
      const double ratio = k1 > 0 ? r.fit.K / k1 : NAN;
      const double dev = ratio / r.layer_factor - 1.0;
      ok = ok && std::abs(dev) < kFrohlichScaling;
      detail += fmt("N_L=%d ratio %.3f vs f %.3f; ", r.n_layers, ratio, r.layer_factor);
    }
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) decreasing = decreasing && rows[i].fit.K < rows[i - 1].fit.K;
  std::string ks;
  for (const auto& r : rows) ks += fmt("%d:%.3g ", r.n_layers, r.fit.K);
  note("K_FS fit (ps^-1) " + ks);
  report(7, "Frohlich suppression and scaling", ok && decreasing,
         detail + fmt("strictly decreasing: %s (limit %.2f)", decreasing ? "yes" : "no",
                      kFrohlichScaling));
}

// 8. synchronised sampling against a single layer
void synchronization(const ModelParameters& base, double k_fs_single, int threads,
                     const fs::path& out) {
  auto p = base;
  p.n_layers = 10;
  p.n_steps = static_cast<int>(std::ceil(units::ps(0.3) / p.dt - 1e-9));
  p.snapshot_times = {0.0, units::fs(10.0), units::fs(100.0), units::fs(300.0)};
  p.sampling_mode = SamplingMode::synchronized;
  const Model m(p);
  const auto r = run_ensemble(m, threads);
  runner::write_relax(out / "sync_layers_10", m, r);
  const auto fit = runner::fit_frohlich(r, p.frohlich_fit_start, p.duration());
  const double dev = fit.K / k_fs_single - 1.0;
  report(8, "synchronization restores scattering", std::abs(dev) < kSyncMatch,
         fmt("K_FS sync N_L=10 %.4g vs independent N_L=1 %.4g ps^-1, deviation %+.3f (limit %.2f)",
             fit.K, k_fs_single, dev, kSyncMatch));
}

// 9. rate constants against the scaling laws
void rate_laws(const runner::RatesTable& table) {
  bool ul_ok = true, ul_dec = true, ud_ok = true, dl_ok = true;
  std::string rows;
  const runner::RatesRow* prev = nullptr;
  for (const auto& r : table.rows) {
    const auto& k = r.fit.rates;
    rows += fmt("%d:(%.3g,%.3g,%s) ", r.n_layers, k.k_UL, k.k_UD,
                r.k_dl ? fmt("%.3g", *r.k_dl).c_str() : "-");
    ul_ok = ul_ok && std::abs(k.k_UL / r.theory.k_ul - 1.0) < kRateLaw;
    if (prev) ul_dec = ul_dec && k.k_UL < prev->fit.rates.k_UL;
    if (r.k_dl) dl_ok = dl_ok && std::abs(*r.k_dl / r.theory.k_dl - 1.0) < kRateLaw;
    if (prev && prev->n_layers >= 2) ud_ok = ud_ok && k.k_UD >= prev->fit.rates.k_UD;
    prev = &r;
  }
  // saturation: the per-layer increase over the last scan interval is below a
  // quarter of the initial per-layer increase
  auto at = [&](int n) -> const runner::RatesRow* {
    for (const auto& r : table.rows)
      if (r.n_layers == n) return &r;
    return nullptr;
  };
  const auto& rs = table.rows;
  bool saturates = false;
  if (at(2) && at(3) && rs.size() >= 2) {
    const double first = at(3)->fit.rates.k_UD - at(2)->fit.rates.k_UD;
    const auto& a = rs[rs.size() - 2];
    const auto& b = rs.back();
    const double last = (b.fit.rates.k_UD - a.fit.rates.k_UD) / (b.n_layers - a.n_layers);
    saturates = first > 0 && last < 0.25 * first;
  }
  note("(k_UL, k_UD, k_DL) ps^-1 " + rows);
  note(fmt("prefactors A_UL %.4g, A_UD %.4g, A_DL %.4g (anchored at N_L=%d)", table.prefactors.a_ul,
           table.prefactors.a_ud, table.prefactors.a_dl, table.dl_anchor_layers));
  report(9, "rate-law trends", ul_ok && ul_dec && ud_ok && saturates && dl_ok,
         fmt("k_UL decreasing %s, within %.0f%% of A_UL f %s; k_UD non-decreasing %s, saturating "
             "%s; k_DL within %.0f%% of A_DL f %s",
             ul_dec ? "yes" : "no", 100 * kRateLaw, ul_ok ? "yes" : "no", ud_ok ? "yes" : "no",
             saturates ? "yes" : "no", 100 * kRateLaw, dl_ok ? "yes" : "no"));
}

// relative Cramer-Rao standard deviation of each rate for Gaussian noise
// `sigma` on every population sample
std::array<double, 6> rate_crb(const RateMatrix& truth, const std::vector<double>& t, double sigma) {
  const auto w = truth.as_array();
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd jac(3 * n, 6);
  for (int k = 0; k < 6; ++k) {
    auto a = w, b = w;
    const double h = 1e-6 * w[k];
    a[k] += h;
    b[k] -= h;
    const auto pa = predict_populations(RateMatrix::from_array(a), Eigen::Vector3d(1, 0, 0), t);
    const auto pb = predict_populations(RateMatrix::from_array(b), Eigen::Vector3d(1, 0, 0), t);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int i = 0; i < 3; ++i) jac(3 * j + i, k) = (pa(i, j) - pb(i, j)) / (2 * h);
    }
  }
  const Eigen::MatrixXd cov = (jac.transpose() * jac).inverse() * sigma * sigma;
  std::array<double, 6> rel{};
  for (int k = 0; k < 6; ++k) rel[k] = std::sqrt(cov(k, k)) / w[k];
  return rel;
}

// 10. fitters on synthetic data
void fitting_round_trips() {
  std::mt19937_64 rng(20240917);
  std::normal_distribution<double> noise(0.0, kNoise);
  double rate_exact = 0.0, rate_noisy = 0.0, exp_exact = 0.0, exp_noisy = 0.0;

  const std::vector<RateMatrix> truths = {{5.0, 3.0, 0.5, 2.0, 0.3, 0.2},
                                          {12.0, 6.0, 1.5, 0.8, 0.4, 0.1}};
  std::vector<double> t(201);
  for (int i = 0; i < 201; ++i) t[i] = i / 200.0;
  for (const auto& truth : truths) {
    const auto clean = predict_populations(truth, Eigen::Vector3d(1, 0, 0), t);
    auto noisy = clean;
    for (Eigen::Index j = 1; j < noisy.cols(); ++j) {
      for (int i = 0; i < 3; ++i) noisy(i, j) += noise(rng);
      noisy.col(j) /= noisy.col(j).sum();
    }
    const auto want = truth.as_array();
    std::string bound;
    for (double sd : rate_crb(truth, t, kNoise)) bound += fmt("%.3f ", sd);
    note("Cramer-Rao relative std of (UL UD DU DL LU LD) at 1% noise: " + bound);
    const auto a = fit_rate_matrix(t, clean).rates.as_array();
    const auto b = fit_rate_matrix(t, noisy).rates.as_array();
    for (int i = 0; i < 6; ++i) {
      rate_exact = std::max(rate_exact, std::abs(a[i] / want[i] - 1.0));
      rate_noisy = std::max(rate_noisy, std::abs(b[i] / want[i] - 1.0));
    }
  }

  struct Exp {
    double a, K, b;
  };
  for (const Exp& e : {Exp{0.8, 5.0, 0.2}, Exp{-0.5, 40.0, 0.6}}) {
    std::vector<double> y(t.size()), yn(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      y[i] = e.a * std::exp(-e.K * t[i]) + e.b;
      yn[i] = y[i] + noise(rng);
    }
    auto dev = [&](const ExpFit& f) {
      return std::max({std::abs(f.a / e.a - 1.0), std::abs(f.K / e.K - 1.0),
                       std::abs(f.b / e.b - 1.0)});
    };
    exp_exact = std::max(exp_exact, dev(fit_exponential(t, y)));
    exp_noisy = std::max(exp_noisy, dev(fit_exponential(t, yn)));
  }
  report(10, "fitting round trips",
         rate_exact < kFitExact && exp_exact < kFitExact && rate_noisy < kFitNoisy &&
             exp_noisy < kFitNoisy,
         fmt("worst relative error: rates %.1e / %.3f, exponential %.1e / %.3f (limits %.2f "
             "noise-free, %.2f with %.0f%% noise)",
             rate_exact, rate_noisy, exp_exact, exp_noisy, kFitExact, kFitNoisy, 100 * kNoise));
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(out);
  const int threads = runner::resolve_threads(0);
  const auto t0 = std::chrono::steady_clock::now();

  oracle_equivalence();
  unitarity(threads);
  eigenstructure();
  phonon_variance();
  vertical_analysis(out);
  fitting_round_trips();

  // one 1 ps scan serves criteria 6, 7 and 9; K_FS uses its first 0.3 ps
  ModelParameters scan = default_parameters();
  scan.n_trajectories = 100;
  scan.n_steps = static_cast<int>(std::ceil(units::ps(1.0) / scan.dt - 1e-9));
  scan.snapshot_times = {0.0, units::fs(10.0), units::fs(100.0), units::fs(300.0), units::ps(1.0)};
  scan.layer_list = {1, 2, 3, 5, 7, 10, 15};
  note(fmt("layer scan: N=%d, %d trajectories, %.1f ps", scan.n_sites, scan.n_trajectories,
           units::to_ps(scan.duration())));
  std::vector<EnsembleResult> runs;
  for (int n : scan.layer_list) {
    auto p = scan;
    p.n_layers = n;
    const auto ts = std::chrono::steady_clock::now();
    const Model m(p);
    runs.push_back(run_ensemble(m, threads));
    runner::write_relax(out / ("layers_" + std::to_string(n)), m, runs.back());
    note(fmt("N_L=%d done in %.0f s", n, seconds_since(ts)));
  }

  vertical_dynamics(runs.front());
  const auto kfs = runner::frohlich_table(scan.layer_list, runs, scan, units::ps(0.3));
  runner::write_frohlich(out / "kfs_vs_layers.csv", kfs);
  frohlich_scaling(kfs);
  synchronization(scan, kfs.front().fit.K, threads, out);
  const auto rates = runner::rates_table(scan.layer_list, runs, scan, scan.duration());
  runner::write_rates(out / "rates_vs_layers.csv", rates);
  rate_laws(rates);

  std::sort(g_outcomes.begin(), g_outcomes.end(),
            [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
  int failed = 0;
  std::printf("\nsummary (%.0f s):\n", seconds_since(t0));
  for (const auto& o : g_outcomes) {
    std::printf("  criterion %2d %-40s %s\n", o.id, o.name.c_str(), o.passed ? "PASS" : "FAIL");
    failed += o.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(g_outcomes.size()) - failed,
              g_outcomes.size());
  return failed == 0 ? 0 : 1;
}
