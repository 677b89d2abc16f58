#include "polarisim/scaling.hpp"

#include <algorithm>
#include <stdexcept>

namespace polarisim {

ScalingPrediction scaling_laws(const CouplingWeights& w, const ScalingPrefactors& a) {
  if (a.a_fs < 0 || a.a_ul < 0 || a.a_ud < 0 || a.a_dl < 0) {
    throw std::invalid_argument("scaling prefactors must be non-negative");
  }
  ScalingPrediction out;
  out.n_layers = static_cast<int>(w.v.size());
  out.layer_factor = layer_factor(w);
  out.dark_factor = 1.0 - out.layer_factor;
  out.k_fs = a.a_fs * out.layer_factor;
  out.k_ul = a.a_ul * out.layer_factor;
  out.k_ud = a.a_ud * (out.n_layers - 1) * out.layer_factor;
  out.k_dl = a.a_dl * out.layer_factor;
  return out;
}

namespace {

CouplingWeights weights_for(int n_layers, const ModelParameters& p) {
  ModelParameters q = p;
  q.n_layers = n_layers;
  return build_coupling_weights(build_geometry(q));
}

}  // namespace

ScalingPrediction scaling_laws(int n_layers, const ModelParameters& p, const ScalingPrefactors& a) {
  return scaling_laws(weights_for(n_layers, p), a);
}

double layer_factor_for(int n_layers, const ModelParameters& p) {
  return layer_factor(weights_for(n_layers, p));
}

double fit_ud_prefactor(std::span<const int> layers, std::span<const double> k_ud,
                        const ModelParameters& p) {
  if (layers.size() != k_ud.size()) throw std::invalid_argument("fit_ud_prefactor: size mismatch");
  double xx = 0.0, xy = 0.0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i] < 2) continue;
    const double x = (layers[i] - 1) * layer_factor_for(layers[i], p);
    xx += x * x;
    xy += x * k_ud[i];
  }
  return xx > 0.0 ? std::max(0.0, xy / xx) : 0.0;
}

}  // namespace polarisim
