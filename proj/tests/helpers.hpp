#pragma once

#include <cmath>
#include <cstdint>

#include "polarisim/model.hpp"
#include "polarisim/propagator.hpp"
#include "polarisim/rng.hpp"

namespace polarisim::testing {

/// Default parameters on a small lattice with a run length that keeps the
/// default snapshot list valid.
inline ModelParameters small_params(int sites, int layers, double dt = 10.0, int steps = 10) {
  ModelParameters p = default_parameters();
  p.n_sites = sites;
  p.n_layers = layers;
  p.dt = dt;
  p.n_steps = steps;
  p.snapshot_times = {0.0};
  p.record_interval = dt;
  return p;
}

/// Centres the excitation window on the lowest positive-k upper polariton,
/// which on small lattices lies far above the default 3.5 eV.
inline void excite_lowest_mode(ModelParameters& p) {
  const Model m(p);
  p.excitation_center_energy = m.basis.e_upper[m.geometry.grid_index_of_units(1)];
  p.excitation_half_width = 1e-3;
}

/// Normalised state with Gaussian random amplitudes on every component.
inline WaveState random_state(int sites, int layers, std::uint64_t seed) {
  WaveState psi(sites, layers);
  const Philox4x32 gen(seed);
  std::uint32_t i = 0;
  auto draw = [&] {
    const auto [a, b] = normal_pair(gen({i++, 0xabcu, 0, 0}));
    return cplx(a, b);
  };
  for (auto& x : psi.c) x = draw();
  for (auto& x : psi.b) x = draw();
  const double s = 1.0 / std::sqrt(psi.norm2());
  for (auto& x : psi.c) x *= s;
  for (auto& x : psi.b) x *= s;
  return psi;
}

inline double max_abs_diff(const WaveState& a, const WaveState& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.c.size(); ++i) e = std::max(e, std::abs(a.c[i] - b.c[i]));
  for (std::size_t i = 0; i < a.b.size(); ++i) e = std::max(e, std::abs(a.b[i] - b.b[i]));
  return e;
}

}  // namespace polarisim::testing
