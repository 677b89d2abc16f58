#include "polarisim/oracle.hpp"

#include <cmath>
#include <string>

namespace polarisim {

namespace {

DenseHamiltonian assemble(const Model& model, const PhononState* phonons) {
  const auto& p = model.params;
  const auto& g = model.geometry;
  const int n = g.n_sites;
  const int nl = g.n_layers;
  const int dim = n * (nl + 1);
  if (dim > kDenseSizeLimit) {
    throw OracleError("dense oracle limited to N*(N_L+1) <= " + std::to_string(kDenseSizeLimit) +
                      ", got " + std::to_string(dim));
  }
  DenseHamiltonian h;
  h.n_sites = n;
  h.n_layers = nl;
  h.matrix = Eigen::MatrixXcd::Zero(dim, dim);

  // cavity
  for (int gi = 0; gi < n; ++gi) {
    h.matrix(h.photon_index(gi), h.photon_index(gi)) = photon_dispersion(g.k_grid[gi], p);
  }
  // excitons: on-site, periodic nearest-neighbour hopping, phonon coupling
  for (int m = 0; m < nl; ++m) {
    for (int s = 0; s < n; ++s) {
      const int i = h.exciton_index(s, m);
      double onsite = p.epsilon0;
      if (phonons) onsite += p.gamma * phonons->q_at(s, m);
      h.matrix(i, i) += onsite;
      const int j = h.exciton_index((s + 1) % n, m);
      h.matrix(i, j) += -p.tau;
      h.matrix(j, i) += -p.tau;
    }
  }
  // exciton-photon coupling beyond the long-wavelength approximation
  const double inv_sqrt_n = 1.0 / std::sqrt(double(n));
  for (int gi = 0; gi < n; ++gi) {
    const double k = g.k_grid[gi];
    const double omega_k = coupling_strength(k, p, model.weights.S);
    for (int m = 0; m < nl; ++m) {
      const double layer = std::sin(g.k0 * g.layer_positions[m]);
      for (int s = 0; s < n; ++s) {
        const cplx v = omega_k * inv_sqrt_n * layer * std::polar(1.0, k * g.site_positions[s]);
        h.matrix(h.exciton_index(s, m), h.photon_index(gi)) += v;
        h.matrix(h.photon_index(gi), h.exciton_index(s, m)) += std::conj(v);
      }
    }
  }
  return h;
}

}  // namespace

DenseHamiltonian build_dense(const Model& model, const PhononState& phonons) {
  if (phonons.n_sites != model.geometry.n_sites || phonons.n_layers != model.geometry.n_layers) {
    throw OracleError("phonon state dimensions do not match the model");
  }
  return assemble(model, &phonons);
}

DenseHamiltonian build_dense(const Model& model) { return assemble(model, nullptr); }

Eigen::VectorXcd to_dense_vector(const WaveState& psi) {
  Eigen::VectorXcd v(psi.c.size() + psi.b.size());
  for (std::size_t i = 0; i < psi.c.size(); ++i) v(i) = psi.c[i];
  for (std::size_t i = 0; i < psi.b.size(); ++i) v(psi.c.size() + i) = psi.b[i];
  return v;
}

WaveState from_dense_vector(const Eigen::VectorXcd& v, int n_sites, int n_layers) {
  WaveState psi(n_sites, n_layers);
  for (int i = 0; i < n_sites; ++i) psi.c[i] = v(i);
  for (std::size_t i = 0; i < psi.b.size(); ++i) psi.b[i] = v(n_sites + i);
  return psi;
}

DensePropagator::DensePropagator(const DenseHamiltonian& h)
    : n_sites_(h.n_sites), n_layers_(h.n_layers) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix);
  if (solver.info() != Eigen::Success) throw OracleError("eigensolver failed");
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

WaveState DensePropagator::propagate(const WaveState& psi, double dt) const {
  Eigen::VectorXcd coeff = vectors_.adjoint() * to_dense_vector(psi);
  for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) *= std::polar(1.0, -values_(i) * dt);
  return from_dense_vector(vectors_ * coeff, n_sites_, n_layers_);
}

WaveState dense_propagate(const WaveState& psi, const DenseHamiltonian& h, double dt) {
  return DensePropagator(h).propagate(psi, dt);
}

}  // namespace polarisim
