#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "polarisim/model.hpp"
#include "polarisim/phonons.hpp"

namespace polarisim {

/// Ensemble-averaged elements <-,k'|X|+,k> for
///   order1: X = -i H_bX dt
///   order2: X = (-i H_bX dt)^2 / 2
///   full:   X = exp(-i H_bX dt) - 1
/// Row i is the upper-polariton momentum k_subgrid[i], column j the
/// lower-polariton momentum k_subgrid[j]. Entries are complex averages; the
/// reported quantities are their magnitudes.
struct TransferMatrices {
  std::vector<int> k_subgrid;  // grid indices
  double delta_t = 0.0;
  int ensemble_size = 0;
  Eigen::MatrixXcd order1;
  Eigen::MatrixXcd order2;
  Eigen::MatrixXcd full;

  Eigen::MatrixXd magnitude1() const { return order1.cwiseAbs(); }
  Eigen::MatrixXd magnitude2() const { return order2.cwiseAbs(); }
  Eigen::MatrixXd magnitude_full() const { return full.cwiseAbs(); }
};

/// `n_points` grid indices centred on k = 0. The stride is chosen so that the
/// subgrid covers twice the momentum of the upper-polariton excitation window
/// edge, and is 1 when that already fits.
std::vector<int> default_k_subgrid(const Model& model, int n_points);

TransferMatrices vertical_transfer_matrices(const Model& model,
                                            std::span<const PhononState> ensemble,
                                            double delta_t, std::span<const int> k_subgrid);

struct TransferSummary {
  double norm_order1 = 0.0;  // Frobenius norms of the magnitude matrices
  double norm_order2 = 0.0;
  double norm_full = 0.0;
  double order1_over_order2 = 0.0;
  double mean_diagonal_full = 0.0;
  double max_offdiagonal_full = 0.0;
  double offdiag_over_diag = 0.0;
};

TransferSummary summarize(const TransferMatrices& t);

struct DisorderFactor {
  std::complex<double> factor;  // <1 - exp(-i gamma q dt)>
  double mean_q2 = 0.0;
  double order2_prediction = 0.0;  // (gamma dt)^2 <q^2> / 2
};

DisorderFactor phonon_disorder_factor(std::span<const PhononState> ensemble, double gamma,
                                      double delta_t);

/// (gamma dt)^2 / (2 beta omega^2), the classical high-temperature limit.
double classical_disorder_prediction(const ModelParameters& p, double delta_t);

}  // namespace polarisim
