#include "polarisim/model.hpp"

#include <cmath>
#include <numbers>

#include "polarisim/units.hpp"

namespace polarisim {

double Geometry::dk() const { return 2.0 * std::numbers::pi / (n_sites * alpha); }

Geometry build_geometry(const ModelParameters& p) {
  validate(p);
  Geometry g;
  g.n_sites = p.n_sites;
  g.n_layers = p.n_layers;
  g.alpha = p.alpha;
  g.k0 = std::numbers::pi / p.cavity_length;

  g.site_positions.resize(p.n_sites);
  for (int n = 0; n < p.n_sites; ++n) g.site_positions[n] = n * p.alpha;

  // stack centred at L/2 (+ optional offset), m = 1..N_L
  const double centre = 0.5 * p.cavity_length + p.stack_offset;
  g.layer_positions.resize(p.n_layers);
  for (int m = 1; m <= p.n_layers; ++m) {
    g.layer_positions[m - 1] = centre + (m - 0.5 * (p.n_layers + 1)) * p.alpha_y;
  }

  g.k_grid.resize(p.n_sites);
  const double dk = g.dk();
  for (int i = 0; i < p.n_sites; ++i) g.k_grid[i] = g.k_units(i) * dk;
  return g;
}

CouplingWeights build_coupling_weights(const Geometry& g) {
  CouplingWeights w;
  w.v.resize(g.n_layers);
  for (int m = 0; m < g.n_layers; ++m) {
    w.v[m] = std::sin(g.k0 * g.layer_positions[m]);
    w.S += w.v[m] * w.v[m];
  }
  const double norm = std::sqrt(w.S);
  w.bright_vector.resize(g.n_layers);
  for (int m = 0; m < g.n_layers; ++m) w.bright_vector[m] = w.v[m] / norm;
  return w;
}

DarkBasis build_dark_basis(const CouplingWeights& w) {
  const int nl = static_cast<int>(w.bright_vector.size());
  DarkBasis dark;
  if (nl <= 1) {
    dark.D.resize(nl, 0);
    return dark;
  }
  // Householder reflector H = I - 2 u u^T / (u^T u) with u = e1 - b maps e1
  // onto b; its remaining columns span the complement of b.
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(w.bright_vector.data(), nl);
  Eigen::VectorXd u = -b;
  u(0) += 1.0;
  const double uu = u.squaredNorm();
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(nl, nl);
  if (uu > 1e-28) H -= (2.0 / uu) * u * u.transpose();
  dark.D = H.rightCols(nl - 1);
  return dark;
}

double exciton_band(double k, const ModelParameters& p) {
  return p.epsilon0 - 2.0 * p.tau * std::cos(k * p.alpha);
}

double photon_dispersion(double k, const ModelParameters& p) {
  const double k0 = std::numbers::pi / p.cavity_length;
  return kUnits.speed_of_light_au / p.refractive_index * std::hypot(k, k0);
}

double coupling_strength(double k, const ModelParameters& p, double S) {
  const double w0 = photon_dispersion(0.0, p);
  return std::sqrt(w0 / photon_dispersion(k, p)) * p.omega0_coupling / std::sqrt(S);
}

double mixing_angle(double omega, double epsilon, double g) {
  // atan2(2g, eps - omega) lies in (0, pi) for g > 0, so theta is in (0, pi/2)
  // and tends to pi/2 when the photon lies far above the exciton.
  return 0.5 * std::atan2(2.0 * g, epsilon - omega);
}

PolaritonBasis build_polariton_basis(const ModelParameters& p, const Geometry& g,
                                     const CouplingWeights& w) {
  PolaritonBasis b;
  b.S = w.S;
  const int n = g.n_sites;
  b.theta.resize(n);
  b.e_upper.resize(n);
  b.e_lower.resize(n);
  b.omega_k.resize(n);
  b.epsilon_k.resize(n);
  b.omega_coupling_k.resize(n);
  const double sqrt_s = std::sqrt(w.S);
  for (int i = 0; i < n; ++i) {
    const double k = g.k_grid[i];
    const double om = photon_dispersion(k, p);
    const double ep = exciton_band(k, p);
    const double cpl = coupling_strength(k, p, w.S);
    const double gk = sqrt_s * cpl;
    const double mean = 0.5 * (om + ep);
    const double half_gap = 0.5 * std::hypot(om - ep, 2.0 * gk);
    b.omega_k[i] = om;
    b.epsilon_k[i] = ep;
    b.omega_coupling_k[i] = cpl;
    b.theta[i] = mixing_angle(om, ep, gk);
    b.e_upper[i] = mean + half_gap;
    b.e_lower[i] = mean - half_gap;
  }
  return b;
}

double layer_factor(const CouplingWeights& w) {
  double s4 = 0.0;
  for (double v : w.v) s4 += v * v * v * v;
  return s4 / (w.S * w.S);
}

double effective_temperature(double temperature, const CouplingWeights& w) {
  return temperature * layer_factor(w);
}

VerticalCriterion vertical_criterion_ratio(const ModelParameters& p) {
  VerticalCriterion c;
  const double w0 = photon_dispersion(0.0, p);
  const double diff = p.epsilon0 * p.epsilon0 - w0 * w0;
  c.inverted_detuning = diff < 0;
  c.ratio = p.refractive_index / kUnits.speed_of_light_au * std::sqrt(std::abs(diff)) * p.alpha;
  c.vertical = c.ratio < 0.1;
  return c;
}

Model::Model(const ModelParameters& p)
    : params(p),
      geometry(build_geometry(p)),
      weights(build_coupling_weights(geometry)),
      basis(build_polariton_basis(p, geometry, weights)),
      dark(build_dark_basis(weights)) {}

}  // namespace polarisim
