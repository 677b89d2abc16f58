#pragma once

#include <cstdint>
#include <vector>

#include "polarisim/model.hpp"
#include "polarisim/params.hpp"

namespace polarisim {

/// Classical mass-weighted phonon coordinates and momenta, one oscillator per
/// (site, layer). Storage is layer-major: index = m * n_sites + n.
struct PhononState {
  int n_sites = 0;
  int n_layers = 0;
  std::vector<double> q;
  std::vector<double> p;
  bool zero_temperature = false;  // set when T = 0 forced an all-zero draw

  PhononState() = default;
  PhononState(int sites, int layers)
      : n_sites(sites), n_layers(layers), q(std::size_t(sites) * layers), p(q.size()) {}

  std::size_t index(int n, int m) const { return std::size_t(m) * n_sites + n; }
  double& q_at(int n, int m) { return q[index(n, m)]; }
  double q_at(int n, int m) const { return q[index(n, m)]; }
  double& p_at(int n, int m) { return p[index(n, m)]; }
  double p_at(int n, int m) const { return p[index(n, m)]; }
};

/// Variances of the sampled distribution for the configured statistics.
struct ThermalMoments {
  double var_q = 0.0;
  double var_p = 0.0;
};

ThermalMoments thermal_moments(const ModelParameters& p);

/// Independent Boltzmann (or Wigner) draw for every oscillator. The value of
/// oscillator (n, m) in trajectory t depends only on (seed, t, n, m).
PhononState sample_thermal(const ModelParameters& p, std::uint64_t seed,
                           std::uint64_t trajectory = 0);

/// Layer 1 drawn as in sample_thermal, then q and p copied to every layer.
PhononState sample_synchronized(const ModelParameters& p, std::uint64_t seed,
                                std::uint64_t trajectory = 0);

PhononState sample_phonons(const ModelParameters& p, SamplingMode mode, std::uint64_t seed,
                           std::uint64_t trajectory = 0);

/// q_bar_n = (1/S) sum_m sin^2(k0 y_m) q_{n,m}.
std::vector<double> layer_averaged_fluctuation(const PhononState& s, const CouplingWeights& w);

}  // namespace polarisim
