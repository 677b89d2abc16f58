#pragma once

#include <span>

namespace polarisim {

/// y(t) = a exp(-K t) + b.
struct ExpFit {
  double a = 0.0;
  double K = 0.0;
  double b = 0.0;
  double residual = 0.0;  // sum of squared residuals
  bool converged = false;
  bool non_decaying = false;  // constant or non-decaying input, K reported as 0

  double operator()(double t) const;
};

/// Nonlinear least squares with K >= 0. Needs at least 5 points.
ExpFit fit_exponential(std::span<const double> times, std::span<const double> series);

}  // namespace polarisim
