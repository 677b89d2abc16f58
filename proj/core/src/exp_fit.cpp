#include "polarisim/exp_fit.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace polarisim {

double ExpFit::operator()(double t) const { return a * std::exp(-K * t) + b; }

namespace {

// work in scaled time s = t / t_scale; the decay constant is exp(kappa)
struct ExpResidual : Eigen::DenseFunctor<double> {
  const std::vector<double>* s;
  const std::vector<double>* y;

  ExpResidual(const std::vector<double>& s_, const std::vector<double>& y_)
      : DenseFunctor<double>(3, static_cast<int>(s_.size())), s(&s_), y(&y_) {}

  int operator()(const InputType& x, ValueType& f) const {
    const double k = std::exp(std::clamp(x(1), -40.0, 40.0));
    for (std::size_t i = 0; i < s->size(); ++i) {
      f(i) = x(0) * std::exp(-k * (*s)[i]) + x(2) - (*y)[i];
    }
    return 0;
  }
};

struct Linear {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
};

// best (a, b) for a fixed decay constant
Linear project(const std::vector<double>& s, const std::vector<double>& y, double k) {
  double see = 0, se = 0, sy = 0, sey = 0;
  const double n = static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = std::exp(-k * s[i]);
    see += e * e;
    se += e;
    sy += y[i];
    sey += e * y[i];
  }
  const double det = see * n - se * se;
  Linear l;
  if (std::abs(det) < 1e-300) {
    l.b = sy / n;
  } else {
    l.a = (sey * n - se * sy) / det;
    l.b = (see * sy - se * sey) / det;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = l.a * std::exp(-k * s[i]) + l.b - y[i];
    l.residual += r * r;
  }
  return l;
}

double log_linear_guess(const std::vector<double>& s, const std::vector<double>& y) {
  const double lo = *std::min_element(y.begin(), y.end());
  const double hi = *std::max_element(y.begin(), y.end());
  const double floor = 1e-3 * (hi - lo);
  double sx = 0, sxx = 0, sl = 0, sxl = 0;
  int m = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = y[i] - lo;
    if (d <= floor) continue;
    const double l = std::log(d);
    sx += s[i];
    sxx += s[i] * s[i];
    sl += l;
    sxl += s[i] * l;
    ++m;
  }
  if (m < 2) return 1.0;
  const double den = m * sxx - sx * sx;
  if (std::abs(den) < 1e-300) return 1.0;
  const double slope = (m * sxl - sx * sl) / den;
  return std::clamp(-slope, 1e-2, 1e3);
}

}  // namespace

ExpFit fit_exponential(std::span<const double> times, std::span<const double> series) {
  if (times.size() != series.size()) throw std::invalid_argument("fit_exponential: size mismatch");
  if (series.size() < 5) throw std::invalid_argument("fit_exponential needs at least 5 points");

  std::vector<double> y(series.begin(), series.end());
  const double lo = *std::min_element(y.begin(), y.end());
  const double hi = *std::max_element(y.begin(), y.end());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());

  ExpFit out;
  if (hi - lo <= 1e-14 * (1.0 + std::abs(mean))) {
    out.b = mean;
    out.converged = true;
    out.non_decaying = true;
    return out;
  }

  double t_scale = 0.0;
  for (double t : times) t_scale = std::max(t_scale, std::abs(t));
  if (!(t_scale > 0.0)) throw std::invalid_argument("fit_exponential: all times are zero");
  std::vector<double> s(times.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = times[i] / t_scale;
  const double s_span = *std::max_element(s.begin(), s.end()) - *std::min_element(s.begin(), s.end());

  // candidate starting decay constants: log-linear estimate and a coarse scan
  std::vector<double> candidates{log_linear_guess(s, y)};
  {
    double best_k = 1.0, best_r = INFINITY;
    for (int i = 0; i <= 240; ++i) {
      const double k = std::exp(std::log(1e-3) + i * (std::log(1e3) - std::log(1e-3)) / 240);
      const double r = project(s, y, k).residual;
      if (r < best_r) {
        best_r = r;
        best_k = k;
      }
    }
    candidates.push_back(best_k);
  }

  using Diff = Eigen::NumericalDiff<ExpResidual, Eigen::Central>;
  Diff functor(ExpResidual(s, y));
  double best_res = INFINITY;
  for (double k0 : candidates) {
    const Linear l = project(s, y, k0);
    Eigen::VectorXd x(3);
    x << l.a, std::log(k0), l.b;
    Eigen::LevenbergMarquardt<Diff> lm(functor);
    lm.setMaxfev(2000);
    lm.setXtol(1e-14);
    lm.setFtol(1e-15);
    const auto status = lm.minimize(x);
    Eigen::VectorXd f(functor.values());
    functor(x, f);
    const double r = f.squaredNorm();
    if (r < best_res) {
      best_res = r;
      const double k_scaled = std::exp(std::clamp(x(1), -40.0, 40.0));
      out.a = x(0);
      out.K = k_scaled / t_scale;
      out.b = x(2);
      out.residual = r;
      out.converged = status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                      status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters;
      out.non_decaying = k_scaled * s_span < 1e-3;
    }
  }
  if (out.non_decaying) {
    // a and K are not separately identifiable; report the level only
    double r = 0.0;
    for (double v : y) r += (v - mean) * (v - mean);
    out.a = 0.0;
    out.K = 0.0;
    out.b = mean;
    out.residual = r;
  }
  return out;
}

}  // namespace polarisim
