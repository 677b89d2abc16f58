#include "polarisim/phonons.hpp"

#include <cmath>
#include <stdexcept>

#include "polarisim/rng.hpp"

namespace polarisim {

ThermalMoments thermal_moments(const ModelParameters& p) {
  const double w = p.phonon_omega;
  const double kt = p.kT();
  if (p.phonon_statistics == PhononStatistics::wigner) {
    // coth(beta w / 2) -> 1 at T = 0 (zero-point motion)
    const double coth = kt > 0 ? 1.0 / std::tanh(0.5 * w / kt) : 1.0;
    return {coth / (2.0 * w), 0.5 * w * coth};
  }
  return {kt / (w * w), kt};
}

namespace {

void fill_layer(PhononState& s, int m, const Philox4x32& gen, std::uint64_t trajectory,
                double sq, double sp) {
  for (int n = 0; n < s.n_sites; ++n) {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m),
                                  static_cast<std::uint32_t>(trajectory),
                                  static_cast<std::uint32_t>(trajectory >> 32)};
    const auto [z0, z1] = normal_pair(gen(ctr));
    s.q_at(n, m) = sq * z0;
    s.p_at(n, m) = sp * z1;
  }
}

bool degenerate(const ModelParameters& p) {
  return p.temperature <= 0 && p.phonon_statistics == PhononStatistics::classical;
}

}  // namespace

PhononState sample_thermal(const ModelParameters& p, std::uint64_t seed, std::uint64_t trajectory) {
  PhononState s(p.n_sites, p.n_layers);
  if (degenerate(p)) {
    s.zero_temperature = true;
    return s;
  }
  const auto mom = thermal_moments(p);
  const Philox4x32 gen(seed);
  for (int m = 0; m < p.n_layers; ++m) {
    fill_layer(s, m, gen, trajectory, std::sqrt(mom.var_q), std::sqrt(mom.var_p));
  }
  return s;
}

PhononState sample_synchronized(const ModelParameters& p, std::uint64_t seed,
                                std::uint64_t trajectory) {
  PhononState s(p.n_sites, p.n_layers);
  if (degenerate(p)) {
    s.zero_temperature = true;
    return s;
  }
  const auto mom = thermal_moments(p);
  fill_layer(s, 0, Philox4x32(seed), trajectory, std::sqrt(mom.var_q), std::sqrt(mom.var_p));
  for (int m = 1; m < p.n_layers; ++m) {
    for (int n = 0; n < p.n_sites; ++n) {
      s.q_at(n, m) = s.q_at(n, 0);
      s.p_at(n, m) = s.p_at(n, 0);
    }
  }
  return s;
}

PhononState sample_phonons(const ModelParameters& p, SamplingMode mode, std::uint64_t seed,
                           std::uint64_t trajectory) {
  return mode == SamplingMode::synchronized ? sample_synchronized(p, seed, trajectory)
                                            : sample_thermal(p, seed, trajectory);
}

std::vector<double> layer_averaged_fluctuation(const PhononState& s, const CouplingWeights& w) {
  if (static_cast<int>(w.v.size()) != s.n_layers) {
    throw std::invalid_argument("layer_averaged_fluctuation: layer count mismatch");
  }
  std::vector<double> qbar(s.n_sites, 0.0);
  for (int m = 0; m < s.n_layers; ++m) {
    const double weight = w.v[m] * w.v[m] / w.S;
    for (int n = 0; n < s.n_sites; ++n) qbar[n] += weight * s.q_at(n, m);
  }
  return qbar;
}

}  // namespace polarisim
