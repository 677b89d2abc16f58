#include "polarisim/vertical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polarisim/fourier.hpp"

namespace polarisim {

std::vector<int> default_k_subgrid(const Model& model, int n_points) {
  const auto& g = model.geometry;
  const auto& b = model.basis;
  const int n = g.n_sites;
  if (n_points < 1) throw std::invalid_argument("k subgrid needs at least one point");
  if (n_points >= n) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  const double top = model.params.excitation_center_energy + model.params.excitation_half_width;
  int edge = 1;
  for (int u = 1; u < n / 2; ++u) {
    if (b.e_upper[g.grid_index_of_units(u)] > top) break;
    edge = u;
  }
  const int span = 2 * edge;
  const int stride = std::max(1, (2 * span + n_points - 2) / (n_points - 1));
  std::vector<int> out;
  for (int i = 0; i < n_points; ++i) {
    const int u = (i - n_points / 2) * stride;
    if (u < -n / 2 || u >= n / 2) continue;
    out.push_back(g.grid_index_of_units(u));
  }
  return out;
}

TransferMatrices vertical_transfer_matrices(const Model& model,
                                            std::span<const PhononState> ensemble,
                                            double delta_t, std::span<const int> k_subgrid) {
  if (!(delta_t > 0.0)) throw std::invalid_argument("vertical analysis needs delta_t > 0");
  if (ensemble.empty()) throw std::invalid_argument("vertical analysis needs a phonon ensemble");
  const auto& g = model.geometry;
  const int n = g.n_sites;
  const int nl = g.n_layers;
  for (int idx : k_subgrid) {
    if (idx < 0 || idx >= n) throw std::invalid_argument("k subgrid index out of range");
  }
  std::vector<double> weight(nl);
  for (int m = 0; m < nl; ++m) weight[m] = model.weights.v[m] * model.weights.v[m] / model.weights.S;

  // Sum over samples of the DFT of g_n = (1/S) sum_m v_m^2 f(gamma q_{n,m} dt),
  // one row per expansion: -ix, -x^2/2, exp(-ix) - 1.
  LayerFft fft(n, 3);
  std::vector<cplx> acc(std::size_t(3) * n, cplx(0.0));
  const double scale = model.params.gamma * delta_t;
  for (const auto& ph : ensemble) {
    if (ph.n_sites != n || ph.n_layers != nl) {
      throw std::invalid_argument("phonon sample dimensions do not match the model");
    }
    auto r1 = fft.row(0);
    auto r2 = fft.row(1);
    auto rf = fft.row(2);
    std::fill(fft.data().begin(), fft.data().end(), cplx(0.0));
    for (int m = 0; m < nl; ++m) {
      for (int s = 0; s < n; ++s) {
        const double x = scale * ph.q_at(s, m);
        r1[s] += weight[m] * cplx(0.0, -x);
        r2[s] += weight[m] * (-0.5 * x * x);
        rf[s] += weight[m] * (std::polar(1.0, -x) - 1.0);
      }
    }
    fft.forward();
    const auto d = fft.data();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += d[i];
  }
  const double norm = 1.0 / (double(n) * double(ensemble.size()));

  TransferMatrices t;
  t.k_subgrid.assign(k_subgrid.begin(), k_subgrid.end());
  t.delta_t = delta_t;
  t.ensemble_size = static_cast<int>(ensemble.size());
  const auto sz = static_cast<Eigen::Index>(k_subgrid.size());
  t.order1.resize(sz, sz);
  t.order2.resize(sz, sz);
  t.full.resize(sz, sz);
  for (Eigen::Index i = 0; i < sz; ++i) {
    const int gk = k_subgrid[i];
    const double cos_k = std::cos(model.basis.theta[gk]);
    for (Eigen::Index j = 0; j < sz; ++j) {
      const int gq = k_subgrid[j];
      const double pref = -std::sin(model.basis.theta[gq]) * cos_k * norm;
      // (1/N) sum_n e^{i(k-k')x_n} g_n is DFT bin (n_x' - n_x) mod N
      const int d = ((g.k_units(gq) - g.k_units(gk)) % n + n) % n;
      t.order1(i, j) = pref * acc[d];
      t.order2(i, j) = pref * acc[std::size_t(n) + d];
      t.full(i, j) = pref * acc[std::size_t(2) * n + d];
    }
  }
  return t;
}

TransferSummary summarize(const TransferMatrices& t) {
  TransferSummary s;
  const Eigen::MatrixXd m1 = t.magnitude1();
  const Eigen::MatrixXd m2 = t.magnitude2();
  const Eigen::MatrixXd mf = t.magnitude_full();
  s.norm_order1 = m1.norm();
  s.norm_order2 = m2.norm();
  s.norm_full = mf.norm();
  s.order1_over_order2 = s.norm_order2 > 0.0 ? s.norm_order1 / s.norm_order2 : 0.0;
  const Eigen::Index n = mf.rows();
  if (n > 0) s.mean_diagonal_full = mf.diagonal().mean();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) s.max_offdiagonal_full = std::max(s.max_offdiagonal_full, mf(i, j));
    }
  }
  s.offdiag_over_diag =
      s.mean_diagonal_full > 0.0 ? s.max_offdiagonal_full / s.mean_diagonal_full : 0.0;
  return s;
}

DisorderFactor phonon_disorder_factor(std::span<const PhononState> ensemble, double gamma,
                                      double delta_t) {
  if (ensemble.empty()) throw std::invalid_argument("disorder factor needs a phonon ensemble");
  DisorderFactor out;
  std::size_t count = 0;
  for (const auto& ph : ensemble) {
    for (double q : ph.q) {
      out.factor += 1.0 - std::polar(1.0, -gamma * q * delta_t);
      out.mean_q2 += q * q;
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("disorder factor needs at least one oscillator");
  out.factor /= double(count);
  out.mean_q2 /= double(count);
  out.order2_prediction = 0.5 * gamma * gamma * delta_t * delta_t * out.mean_q2;
  return out;
}

double classical_disorder_prediction(const ModelParameters& p, double delta_t) {
  const double gdt = p.gamma * delta_t;
  return gdt * gdt * p.kT() / (2.0 * p.phonon_omega * p.phonon_omega);
}

}  // namespace polarisim
