#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <stdexcept>

namespace polarisim {

/// Three-state kinetics among upper polariton (U), dark states (D) and lower
/// polariton (L). k_XY is the rate from X to Y.
struct RateMatrix {
  double k_UL = 0.0;
  double k_UD = 0.0;
  double k_DU = 0.0;
  double k_DL = 0.0;
  double k_LU = 0.0;
  double k_LD = 0.0;

  /// dP/dt = K P with P = (P_U, P_D, P_L); columns sum to zero.
  Eigen::Matrix3d generator() const;

  std::array<double, 6> as_array() const { return {k_UL, k_UD, k_DU, k_DL, k_LU, k_LD}; }
  static RateMatrix from_array(const std::array<double, 6>& a);
};

class FitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// P(t) = exp(K t) P(0), one column per time. Uses the eigendecomposition of
/// K and falls back to scaling and squaring when K is close to defective.
/// Entries below zero by less than 1e-12 are clipped.
Eigen::Matrix3Xd predict_populations(const RateMatrix& k, const Eigen::Vector3d& p0,
                                     std::span<const double> times);

struct RateFit {
  RateMatrix rates;
  double residual = 0.0;  // sum of squared population residuals
  bool converged = false;
  int best_start = -1;
  int starts = 0;
};

struct RateFitOptions {
  /// When false only k_UL and k_LU are fitted and the four rates involving the
  /// dark manifold are held at zero (a single layer has no dark states).
  bool dark_states = true;
};

/// Least-squares fit of the six rates to populations (rows U, D, L) sampled
/// at `times`. Rates are parameterised as k = exp(x) / t_span. The fit is
/// run from a fixed grid of starting points; the winner has the lowest
/// residual, then the lowest k_UL, then the lowest start index. P(0) is the
/// first data column renormalised to unit sum.
RateFit fit_rate_matrix(std::span<const double> times, const Eigen::Matrix3Xd& populations,
                        const RateFitOptions& options = {});

}  // namespace polarisim
