#include "polarisim/observables.hpp"

#include <cmath>

namespace polarisim {

double KResolvedPopulations::upper() const {
  double s = 0.0;
  for (double x : p_upper_k) s += x;
  return s;
}

double KResolvedPopulations::lower() const {
  double s = 0.0;
  for (double x : p_lower_k) s += x;
  return s;
}

bool WindowSpec::contains(double k) const {
  // relative slack so grid points exactly on the edge count as inside
  return std::abs(k - k_center) <= halfwidth * (1.0 + 1e-12);
}

WindowSpec make_window(const Geometry& g, double k_center, int halfwidth_units) {
  return {k_center, halfwidth_units * g.dk()};
}

KResolvedPopulations band_populations(const KSpaceState& psik, const PolaritonBasis& basis,
                                      const CouplingWeights& w, const DarkBasis& dark) {
  const int n = psik.n_sites;
  const int nl = psik.n_layers;
  const auto& bright = w.bright_vector;
  KResolvedPopulations out;
  out.p_upper_k.resize(n);
  out.p_lower_k.resize(n);
  double total = 0.0;
  std::vector<cplx> layer(nl);
  for (int gi = 0; gi < n; ++gi) {
    cplx bb = 0.0;
    for (int m = 0; m < nl; ++m) {
      layer[m] = psik.b[std::size_t(m) * n + gi];
      bb += bright[m] * layer[m];
      total += std::norm(layer[m]);
    }
    total += std::norm(psik.c[gi]);
    const double s = std::sin(basis.theta[gi]);
    const double c = std::cos(basis.theta[gi]);
    out.p_upper_k[gi] = std::norm(s * psik.c[gi] + c * bb);
    out.p_lower_k[gi] = std::norm(c * psik.c[gi] - s * bb);
    for (int d = 0; d < dark.n_dark(); ++d) {
      cplx a = 0.0;
      for (int m = 0; m < nl; ++m) a += dark.D(m, d) * layer[m];
      out.dark_direct += std::norm(a);
    }
  }
  // complement relative to the actual norm so that rounding in the
  // normalisation does not leak into the dark population
  out.dark_total = total - out.upper() - out.lower();
  return out;
}

KResolvedPopulations band_populations(const WaveState& psi, const Model& model) {
  return band_populations(to_k_space(psi, model.geometry), model.basis, model.weights,
                          model.dark);
}

WindowPopulations window_populations(const KResolvedPopulations& kres, const Geometry& g,
                                     const WindowSpec& window) {
  WindowPopulations out;
  double lower = 0.0;
  for (int gi = 0; gi < g.n_sites; ++gi) {
    lower += kres.p_lower_k[gi];
    if (window.contains(g.k_grid[gi])) out.p_in += kres.p_lower_k[gi];
  }
  out.p_out = lower - out.p_in;
  if (lower >= kMinLowerPopulation) {
    out.in_relative = out.p_in / lower;
    out.out_relative = out.p_out / lower;
  }
  return out;
}

}  // namespace polarisim
