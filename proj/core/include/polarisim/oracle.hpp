#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "polarisim/model.hpp"
#include "polarisim/phonons.hpp"
#include "polarisim/propagator.hpp"

namespace polarisim {

/// Largest basis dimension N * (N_L + 1) the dense oracle accepts.
inline constexpr int kDenseSizeLimit = 4096;

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full light-matter Hamiltonian in the single-excitation space, assembled
/// term by term in the site basis. Rows 0..N-1 are photons |1_k> in grid
/// order, followed by excitons |n,m> at N + m*N + n.
struct DenseHamiltonian {
  int n_sites = 0;
  int n_layers = 0;
  Eigen::MatrixXcd matrix;

  int photon_index(int grid_index) const { return grid_index; }
  int exciton_index(int n, int m) const { return n_sites + m * n_sites + n; }
  int dimension() const { return static_cast<int>(matrix.rows()); }
};

/// Exciton hopping (periodic), on-site energies plus gamma*q, cavity modes and
/// the momentum-resolved exciton-photon coupling (Omega_k/sqrt(N)) e^{ikx_n}
/// sin(k0 y_m). Ignores the phonon coupling when `phonons` is empty.
DenseHamiltonian build_dense(const Model& model, const PhononState& phonons);
DenseHamiltonian build_dense(const Model& model);

Eigen::VectorXcd to_dense_vector(const WaveState& psi);
WaveState from_dense_vector(const Eigen::VectorXcd& v, int n_sites, int n_layers);

/// exp(-i H dt) through a cached eigendecomposition of H.
class DensePropagator {
 public:
  explicit DensePropagator(const DenseHamiltonian& h);
  const Eigen::VectorXd& eigenvalues() const { return values_; }
  WaveState propagate(const WaveState& psi, double dt) const;

 private:
  int n_sites_;
  int n_layers_;
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

WaveState dense_propagate(const WaveState& psi, const DenseHamiltonian& h, double dt);

}  // namespace polarisim
