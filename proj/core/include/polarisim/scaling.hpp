#pragma once

#include <span>
#include <vector>

#include "polarisim/model.hpp"
#include "polarisim/params.hpp"

namespace polarisim {

struct ScalingPrefactors {
  double a_fs = 0.0;
  double a_ul = 0.0;
  double a_ud = 0.0;
  double a_dl = 0.0;
};

struct ScalingPrediction {
  int n_layers = 0;
  double layer_factor = 0.0;   // f(N_L) = sum sin^4 / S^2
  double dark_factor = 0.0;    // sum v^2 (1 - v^2) / S, exact bright-to-dark weight
  double k_fs = 0.0;
  double k_ul = 0.0;
  double k_ud = 0.0;
  double k_dl = 0.0;
};

ScalingPrediction scaling_laws(const CouplingWeights& w, const ScalingPrefactors& a);

/// Same, with the layer geometry rebuilt from `p` for `n_layers` layers.
ScalingPrediction scaling_laws(int n_layers, const ModelParameters& p, const ScalingPrefactors& a);

double layer_factor_for(int n_layers, const ModelParameters& p);

/// Least-squares A in K_UD = A (N_L - 1) f(N_L) over the points with N_L >= 2.
/// Returns 0 when no such point exists.
double fit_ud_prefactor(std::span<const int> layers, std::span<const double> k_ud,
                        const ModelParameters& p);

}  // namespace polarisim
