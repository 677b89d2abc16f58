#include "polarisim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "polarisim/units.hpp"

namespace polarisim {

double WaveState::norm2() const {
  double s = 0.0;
  for (const auto& x : c) s += std::norm(x);
  for (const auto& x : b) s += std::norm(x);
  return s;
}

KSpaceState to_k_space(const WaveState& psi, const Geometry& g) {
  const int n = psi.n_sites;
  LayerFft fft(n, psi.n_layers);
  std::copy(psi.b.begin(), psi.b.end(), fft.data().begin());
  fft.forward();
  KSpaceState out{n, psi.n_layers, psi.c, std::vector<cplx>(psi.b.size())};
  const double scale = 1.0 / std::sqrt(double(n));
  for (int m = 0; m < psi.n_layers; ++m) {
    auto row = fft.row(m);
    for (int gi = 0; gi < n; ++gi) out.b[std::size_t(m) * n + gi] = scale * row[g.fft_index(gi)];
  }
  return out;
}

WaveState from_k_space(const KSpaceState& psik, const Geometry& g) {
  const int n = psik.n_sites;
  LayerFft fft(n, psik.n_layers);
  for (int m = 0; m < psik.n_layers; ++m) {
    auto row = fft.row(m);
    for (int gi = 0; gi < n; ++gi) row[g.fft_index(gi)] = psik.b[std::size_t(m) * n + gi];
  }
  fft.backward();
  WaveState out(n, psik.n_layers);
  out.c = psik.c;
  const double scale = 1.0 / std::sqrt(double(n));
  auto data = fft.data();
  for (std::size_t i = 0; i < out.b.size(); ++i) out.b[i] = scale * data[i];
  return out;
}

InitialExcitation prepare_initial_state(const Model& model) {
  const auto& p = model.params;
  const auto& g = model.geometry;
  const auto& basis = model.basis;
  const double centre = p.excitation_center_energy;
  const double half = p.excitation_half_width;
  const double sigma = 0.5 * half;

  std::vector<int> idx;
  std::vector<double> weight;
  double nearest = std::numeric_limits<double>::quiet_NaN();
  for (int gi = 0; gi < g.n_sites; ++gi) {
    if (g.k_units(gi) <= 0) continue;
    const double e = basis.e_upper[gi];
    if (std::isnan(nearest) || std::abs(e - centre) < std::abs(nearest - centre)) nearest = e;
    if (std::abs(e - centre) > half) continue;
    idx.push_back(gi);
    const double d = e - centre;
    weight.push_back(p.excitation_profile == ExcitationProfile::gaussian
                         ? std::exp(-d * d / (2.0 * sigma * sigma))
                         : 1.0);
  }
  if (idx.empty()) {
    std::ostringstream msg;
    msg << "no positive-k upper polariton state within " << units::to_ev(centre) << " +- "
        << units::to_ev(half) << " eV; nearest attainable E_+ is " << units::to_ev(nearest)
        << " eV (k grid spacing " << g.dk() << " bohr^-1, increase n_sites or move the window)";
    throw ExcitationWindowError(msg.str());
  }

  double wsum = 0.0;
  for (double w : weight) wsum += w;

  InitialExcitation out;
  out.excited = idx;
  KSpaceState psik{g.n_sites, g.n_layers, std::vector<cplx>(g.n_sites),
                   std::vector<cplx>(std::size_t(g.n_sites) * g.n_layers)};
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const int gi = idx[j];
    const double pop = weight[j] / wsum;
    const double a = std::sqrt(pop);
    const double th = basis.theta[gi];
    psik.c[gi] = a * std::sin(th);
    for (int m = 0; m < g.n_layers; ++m) {
      psik.b[std::size_t(m) * g.n_sites + gi] = a * std::cos(th) * model.weights.bright_vector[m];
    }
    out.k_bar += pop * g.k_grid[gi];
    out.mean_energy += pop * basis.e_upper[gi];
  }
  out.state = from_k_space(psik, g);
  return out;
}

void kick(PhononState& ph, std::span<const cplx> b, double gamma, double h) {
  const double f = h * gamma;
  for (std::size_t i = 0; i < ph.p.size(); ++i) ph.p[i] -= f * std::norm(b[i]);
}

void harmonic_drift(PhononState& ph, double omega, double dt) {
  const double c = std::cos(omega * dt);
  const double s = std::sin(omega * dt);
  for (std::size_t i = 0; i < ph.q.size(); ++i) {
    const double q = ph.q[i];
    const double p = ph.p[i];
    ph.q[i] = c * q + (s / omega) * p;
    ph.p[i] = c * p - omega * s * q;
  }
}

PhononState classical_step(PhononState ph, const WaveState& psi, double dt,
                           const ModelParameters& p) {
  kick(ph, psi.b, p.gamma, 0.5 * dt);
  harmonic_drift(ph, p.phonon_omega, dt);
  kick(ph, psi.b, p.gamma, 0.5 * dt);
  return ph;
}

SplitPropagator::SplitPropagator(const Model& model)
    : model_(&model),
      fft_(model.geometry.n_sites, model.geometry.n_layers),
      grid_of_fft_(model.geometry.n_sites),
      sqrt_n_(std::sqrt(double(model.geometry.n_sites))) {
  const auto& g = model.geometry;
  for (int gi = 0; gi < g.n_sites; ++gi) grid_of_fft_[g.fft_index(gi)] = gi;
  table_.dt = std::numeric_limits<double>::quiet_NaN();
}

void SplitPropagator::ensure_table(double dt) {
  if (table_.dt == dt) return;
  const auto& basis = model_->basis;
  const int n = model_->geometry.n_sites;
  table_.m00.resize(n);
  table_.m01.resize(n);
  table_.m11.resize(n);
  table_.dark.resize(n);
  for (int j = 0; j < n; ++j) {
    const int gi = grid_of_fft_[j];
    const double s = std::sin(basis.theta[gi]);
    const double c = std::cos(basis.theta[gi]);
    const cplx up = std::polar(1.0, -basis.e_upper[gi] * dt);
    const cplx lp = std::polar(1.0, -basis.e_lower[gi] * dt);
    table_.m00[j] = s * s * up + c * c * lp;
    table_.m01[j] = s * c * (up - lp);
    table_.m11[j] = c * c * up + s * s * lp;
    table_.dark[j] = std::polar(1.0, -basis.epsilon_k[gi] * dt);
  }
  table_.dt = dt;
}

void SplitPropagator::polariton_in_buffer(std::span<cplx> c) {
  // The buffer holds real-space b on entry and N * b on exit (unnormalised
  // transform pair); the caller folds the 1/N into its next pass.
  const int n = model_->geometry.n_sites;
  const int nl = model_->geometry.n_layers;
  const auto& bright = model_->weights.bright_vector;
  fft_.forward();
  auto data = fft_.data();
  for (int j = 0; j < n; ++j) {
    const int gi = grid_of_fft_[j];
    // forward DFT carries sqrt(N) relative to the unitary convention; scale
    // the photon amplitude to match
    cplx bt = 0.0;
    for (int m = 0; m < nl; ++m) bt += bright[m] * data[std::size_t(m) * n + j];
    const cplx ct = sqrt_n_ * c[gi];
    const cplx c_new = table_.m00[j] * ct + table_.m01[j] * bt;
    const cplx b_new = table_.m01[j] * ct + table_.m11[j] * bt;
    const cplx ed = table_.dark[j];
    const cplx shift = b_new - ed * bt;
    for (int m = 0; m < nl; ++m) {
      auto& x = data[std::size_t(m) * n + j];
      x = ed * x + bright[m] * shift;
    }
    c[gi] = c_new / sqrt_n_;
  }
  fft_.backward();
}

void SplitPropagator::finish_pass(PhononState& ph, bool drift, double env_dt, double kick_dt,
                                  double scale) {
  const double gamma = model_->params.gamma;
  const double w = model_->params.phonon_omega;
  const double dt = model_->params.dt;
  const double cw = std::cos(w * dt);
  const double sw = std::sin(w * dt);
  auto data = fft_.data();
  const std::size_t total = data.size();
  double* q = ph.q.data();
  double* p = ph.p.data();
  for (std::size_t i = 0; i < total; ++i) {
    if (drift) {
      const double qi = q[i];
      const double pi = p[i];
      q[i] = cw * qi + (sw / w) * pi;
      p[i] = cw * pi - w * sw * qi;
    }
    cplx x = data[i] * scale;
    if (env_dt != 0.0) x *= std::polar(1.0, -gamma * q[i] * env_dt);
    data[i] = x;
    p[i] -= kick_dt * gamma * std::norm(x);
  }
}

void SplitPropagator::apply_env_phase(WaveState& psi, const PhononState& ph, double dt) const {
  const double gamma = model_->params.gamma;
  for (std::size_t i = 0; i < psi.b.size(); ++i) {
    psi.b[i] *= std::polar(1.0, -gamma * ph.q[i] * dt);
  }
}

void SplitPropagator::apply_polariton_step(WaveState& psi, double dt) {
  ensure_table(dt);
  std::copy(psi.b.begin(), psi.b.end(), fft_.data().begin());
  polariton_in_buffer(psi.c);
  const double inv_n = 1.0 / model_->geometry.n_sites;
  auto data = fft_.data();
  for (std::size_t i = 0; i < psi.b.size(); ++i) psi.b[i] = inv_n * data[i];
}

void SplitPropagator::advance(WaveState& psi, PhononState& ph, int steps) {
  if (steps <= 0) return;
  const double dt = model_->params.dt;
  const double inv_n = 1.0 / model_->geometry.n_sites;
  ensure_table(dt);
  std::copy(psi.b.begin(), psi.b.end(), fft_.data().begin());

  if (model_->params.splitting == Splitting::strang) {
    finish_pass(ph, false, 0.5 * dt, 0.5 * dt, 1.0);
    for (int s = 0; s < steps; ++s) {
      polariton_in_buffer(psi.c);
      const double h = (s + 1 == steps) ? 0.5 * dt : dt;
      finish_pass(ph, true, h, h, inv_n);
    }
  } else {
    for (int s = 0; s < steps; ++s) {
      finish_pass(ph, false, dt, 0.5 * dt, 1.0);
      polariton_in_buffer(psi.c);
      finish_pass(ph, true, 0.0, 0.5 * dt, inv_n);
    }
  }
  auto data = fft_.data();
  std::copy(data.begin(), data.end(), psi.b.begin());
}

void SplitPropagator::advance_frozen(WaveState& psi, const PhononState& ph, int steps,
                                     double dt) {
  if (steps <= 0) return;
  apply_env_phase(psi, ph, 0.5 * dt);
  for (int s = 0; s < steps; ++s) {
    apply_polariton_step(psi, dt);
    apply_env_phase(psi, ph, (s + 1 == steps) ? 0.5 * dt : dt);
  }
}

KSpaceState SplitPropagator::k_space(const WaveState& psi) {
  return to_k_space(psi, model_->geometry);
}

EhrenfestEnergy SplitPropagator::energy(const WaveState& psi, const PhononState& ph) {
  const auto& basis = model_->basis;
  const auto& bright = model_->weights.bright_vector;
  const int n = psi.n_sites;
  const int nl = psi.n_layers;
  const auto psik = k_space(psi);
  EhrenfestEnergy e;
  for (int gi = 0; gi < n; ++gi) {
    cplx bb = 0.0;
    double layer_sum = 0.0;
    for (int m = 0; m < nl; ++m) {
      const cplx x = psik.b[std::size_t(m) * n + gi];
      bb += bright[m] * x;
      layer_sum += std::norm(x);
    }
    const double s = std::sin(basis.theta[gi]);
    const double c = std::cos(basis.theta[gi]);
    const cplx up = s * psik.c[gi] + c * bb;
    const cplx lp = c * psik.c[gi] - s * bb;
    e.polariton += basis.e_upper[gi] * std::norm(up) + basis.e_lower[gi] * std::norm(lp) +
                   basis.epsilon_k[gi] * (layer_sum - std::norm(bb));
  }
  const double gamma = model_->params.gamma;
  const double w = model_->params.phonon_omega;
  for (std::size_t i = 0; i < ph.q.size(); ++i) {
    e.coupling += gamma * ph.q[i] * std::norm(psi.b[i]);
    e.phonon += 0.5 * (ph.p[i] * ph.p[i] + w * w * ph.q[i] * ph.q[i]);
  }
  return e;
}

}  // namespace polarisim
