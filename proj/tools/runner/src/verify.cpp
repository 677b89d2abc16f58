#include <cmath>
#include <cstdio>

#include "csv.hpp"
#include "polarisim/oracle.hpp"
#include "polarisim/phonons.hpp"
#include "polarisim/rng.hpp"
#include "polarisim/runner.hpp"

namespace polarisim::runner {

namespace {

WaveState random_state(int sites, int layers, std::uint64_t seed) {
  WaveState psi(sites, layers);
  const Philox4x32 gen(seed);
  std::uint32_t i = 0;
  auto draw = [&] {
    const auto [a, b] = normal_pair(gen({i++, 0x5eedu, 0, 0}));
    return cplx(a, b);
  };
  for (auto& x : psi.c) x = draw();
  for (auto& x : psi.b) x = draw();
  const double s = 1.0 / std::sqrt(psi.norm2());
  for (auto& x : psi.c) x *= s;
  for (auto& x : psi.b) x *= s;
  return psi;
}

double harmonic_energy(const PhononState& s, double w) {
  double e = 0.0;
  for (std::size_t i = 0; i < s.q.size(); ++i) e += 0.5 * (s.p[i] * s.p[i] + w * w * s.q[i] * s.q[i]);
  return e;
}

double variance(const std::vector<double>& x) {
  double m = 0.0, m2 = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double v : x) m2 += (v - m) * (v - m);
  return m2 / static_cast<double>(x.size() - 1);
}

VerifyCheck check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value < tolerance};
}

// variance of the layer-averaged displacement over `draws` samples, relative
// to the expected value
double qbar_variance_error(const ModelParameters& p, SamplingMode mode, int draws, double expected) {
  const Model m(p);
  std::vector<double> qbar;
  qbar.reserve(static_cast<std::size_t>(draws) * p.n_sites);
  for (int t = 0; t < draws; ++t) {
    const auto s = sample_phonons(p, mode, p.seed, static_cast<std::uint64_t>(t));
    const auto q = layer_averaged_fluctuation(s, m.weights);
    qbar.insert(qbar.end(), q.begin(), q.end());
  }
  return std::abs(variance(qbar) / expected - 1.0);
}

}  // namespace

std::vector<VerifyCheck> run_verify(const ModelParameters& p) {
  const Model model(p);
  if (static_cast<long>(p.n_sites) * (p.n_layers + 1) > kDenseSizeLimit) {
    throw OracleError("verify needs a small lattice: N (N_L + 1) must not exceed " +
                      std::to_string(kDenseSizeLimit));
  }
  std::vector<VerifyCheck> out;

  {  // split-operator against the dense exponential with frozen phonons
    const auto ph = sample_thermal(p, p.seed);
    const auto psi0 = random_state(p.n_sites, p.n_layers, p.seed);
    const auto ref = dense_propagate(psi0, build_dense(model, ph), p.dt * p.n_steps);
    auto psi = psi0;
    SplitPropagator(model).advance_frozen(psi, ph, p.n_steps, p.dt);
    double err = 0.0;
    for (std::size_t i = 0; i < psi.c.size(); ++i) err = std::max(err, std::abs(psi.c[i] - ref.c[i]));
    for (std::size_t i = 0; i < psi.b.size(); ++i) err = std::max(err, std::abs(psi.b[i] - ref.b[i]));
    out.push_back(check("oracle_max_amplitude_error", err, 1e-8));
  }
  {  // norm over 1000 Ehrenfest steps
    auto ph = sample_thermal(p, p.seed);
    auto psi = random_state(p.n_sites, p.n_layers, p.seed + 1);
    SplitPropagator(model).advance(psi, ph, 1000);
    out.push_back(check("norm_drift_1000_steps", std::abs(psi.norm2() - 1.0), 1e-10));
  }
  {  // harmonic bath energy without exciton-phonon coupling
    ModelParameters q = p;
    q.gamma = 0.0;
    q.dt = 10.0;
    const Model free(q);
    auto ph = sample_thermal(q, q.seed);
    const double e0 = harmonic_energy(ph, q.phonon_omega);
    auto psi = random_state(q.n_sites, q.n_layers, q.seed + 2);
    SplitPropagator(free).advance(psi, ph, 10000);
    out.push_back(check("harmonic_energy_rel_drift_1e4_steps",
                        std::abs(harmonic_energy(ph, q.phonon_omega) - e0) / e0, 1e-10));
  }
  {  // effective phonon variance of the layer average
    const double var_q = thermal_moments(p).var_q;
    out.push_back(check("qbar_variance_independent",
                        qbar_variance_error(p, SamplingMode::independent, 10000,
                                            var_q * layer_factor(model.weights)),
                        0.05));
    out.push_back(check("qbar_variance_synchronized",
                        qbar_variance_error(p, SamplingMode::synchronized, 10000, var_q), 0.05));
  }
  return out;
}

int cmd_verify(const ExperimentSpec& spec) {
  const auto checks = run_verify(spec.params);
  std::filesystem::create_directories(spec.output_dir);
  CsvWriter csv(spec.output_dir / "verify.csv", {"check", "value", "tolerance", "passed"});
  bool ok = true;
  std::printf("%-38s %-12s %-10s %s\n", "check", "value", "tolerance", "result");
  for (const auto& c : checks) {
    std::printf("%-38s %-12.4g %-10.3g %s\n", c.name.c_str(), c.value, c.tolerance,
                c.passed ? "PASS" : "FAIL");
    csv.row(c.name, c.value, c.tolerance, c.passed ? 1 : 0);
    ok = ok && c.passed;
  }
  write_meta(spec.output_dir, spec);
  return ok ? 0 : 1;
}

}  // namespace polarisim::runner
