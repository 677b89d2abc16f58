#pragma once

#include <Eigen/Dense>
#include <vector>

#include "polarisim/params.hpp"

namespace polarisim {

/// Lattice and cavity geometry. The in-plane k grid is stored in ascending
/// order, k = 2*pi*n_x/(N*alpha) with n_x = -N/2 .. N/2-1; `grid index` always
/// refers to a position in this ordering.
struct Geometry {
  int n_sites = 0;
  int n_layers = 0;
  double alpha = 0.0;
  double k0 = 0.0;  // pi / L
  std::vector<double> site_positions;
  std::vector<double> layer_positions;
  std::vector<double> k_grid;

  double dk() const;
  /// n_x of a grid index.
  int k_units(int grid_index) const { return grid_index - n_sites / 2; }
  /// Position of a grid index in FFTW (unshifted) order.
  int fft_index(int grid_index) const { return (grid_index + n_sites / 2) % n_sites; }
  int grid_index_of_units(int n_x) const { return n_x + n_sites / 2; }
};

Geometry build_geometry(const ModelParameters& p);

/// Layer weights v_m = sin(k0 y_m) of the cavity field at each layer.
struct CouplingWeights {
  std::vector<double> v;
  double S = 0.0;  // sum of v_m^2
  std::vector<double> bright_vector;  // v_m / sqrt(S)
};

CouplingWeights build_coupling_weights(const Geometry& g);

/// Orthonormal complement of the bright layer vector, one column per dark
/// layer combination (N_L x (N_L-1)).
struct DarkBasis {
  Eigen::MatrixXd D;
  int n_dark() const { return static_cast<int>(D.cols()); }
};

DarkBasis build_dark_basis(const CouplingWeights& w);

/// Exact per-k diagonalisation of the photon / bright-exciton block. All arrays
/// are indexed by grid index. The upper polariton is
/// |+,k> = sin(theta)|1_k> + cos(theta)|B,k>, the lower polariton
/// |-,k> = cos(theta)|1_k> - sin(theta)|B,k>.
struct PolaritonBasis {
  double S = 0.0;
  std::vector<double> theta;
  std::vector<double> e_upper;
  std::vector<double> e_lower;
  std::vector<double> omega_k;
  std::vector<double> epsilon_k;
  std::vector<double> omega_coupling_k;

  int size() const { return static_cast<int>(theta.size()); }
};

double exciton_band(double k, const ModelParameters& p);
double photon_dispersion(double k, const ModelParameters& p);
/// Omega_k = sqrt(omega_{k=0}/omega_k) * Omega_0/sqrt(S).
double coupling_strength(double k, const ModelParameters& p, double S);

/// Mixing angle in (0, pi/2) for the block [[omega, g], [g, epsilon]] with
/// g = sqrt(S)*Omega_k > 0; sin(theta)^2 is the photon weight of the upper
/// polariton.
double mixing_angle(double omega, double epsilon, double g);

PolaritonBasis build_polariton_basis(const ModelParameters& p, const Geometry& g,
                                     const CouplingWeights& w);

/// f(N_L) = sum_m sin^4(k0 y_m) / S^2.
double layer_factor(const CouplingWeights& w);
double effective_temperature(double temperature, const CouplingWeights& w);

struct VerticalCriterion {
  double ratio = 0.0;       // (eta/c) sqrt|eps0^2 - omega0^2| * alpha
  bool vertical = false;    // ratio < 0.1
  bool inverted_detuning = false;  // eps0 < omega0; absolute value was used
};

VerticalCriterion vertical_criterion_ratio(const ModelParameters& p);

/// Everything derived from the parameters that the dynamics needs. Immutable
/// once built and shared between trajectory workers.
struct Model {
  ModelParameters params;
  Geometry geometry;
  CouplingWeights weights;
  PolaritonBasis basis;
  DarkBasis dark;

  explicit Model(const ModelParameters& p);
};

}  // namespace polarisim
