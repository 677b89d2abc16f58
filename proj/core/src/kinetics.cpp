#include "polarisim/kinetics.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/MatrixFunctions>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace polarisim {

Eigen::Matrix3d RateMatrix::generator() const {
  Eigen::Matrix3d k;
  k << -k_UL - k_UD, k_DU, k_LU,
       k_UD, -k_DL - k_DU, k_LD,
       k_UL, k_DL, -k_LU - k_LD;
  return k;
}

RateMatrix RateMatrix::from_array(const std::array<double, 6>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5]};
}

namespace {

constexpr double kDefectiveCondition = 1e8;
constexpr double kClip = 1e-12;

void clip(Eigen::Matrix3Xd& p) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p.data()[i] < 0.0 && p.data()[i] > -kClip) p.data()[i] = 0.0;
  }
}

}  // namespace

Eigen::Matrix3Xd predict_populations(const RateMatrix& rates, const Eigen::Vector3d& p0,
                                     std::span<const double> times) {
  const Eigen::Matrix3d k = rates.generator();
  Eigen::Matrix3Xd out(3, times.size());

  Eigen::EigenSolver<Eigen::Matrix3d> es(k);
  bool use_eigen = es.info() == Eigen::Success;
  Eigen::Matrix3cd v;
  Eigen::Vector3cd coeff;
  if (use_eigen) {
    v = es.eigenvectors();
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(v).singularValues();
    use_eigen = s(2) > 0.0 && s(0) / s(2) < kDefectiveCondition;
    if (use_eigen) coeff = v.partialPivLu().solve(p0.cast<std::complex<double>>());
  }

  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j];
    if (use_eigen) {
      Eigen::Vector3cd c = coeff;
      for (int i = 0; i < 3; ++i) c(i) *= std::exp(es.eigenvalues()(i) * t);
      out.col(j) = (v * c).real();
    } else {
      const Eigen::Matrix3d kt = k * t;
      out.col(j) = kt.exp() * p0;
    }
  }
  clip(out);
  return out;
}

namespace {

constexpr double kRidge = 1e-4;
constexpr double kMaxExponent = 40.0;

struct RateResidual : Eigen::DenseFunctor<double> {
  const std::vector<double>* t;  // times relative to the first sample
  const Eigen::Matrix3Xd* data;
  Eigen::Vector3d p0;
  double t_span;
  std::vector<int> free;  // rate slots (as_array order) that are fitted

  RateResidual(const std::vector<double>& times, const Eigen::Matrix3Xd& d,
               const Eigen::Vector3d& start, double span, std::vector<int> free_slots)
      : DenseFunctor<double>(static_cast<int>(free_slots.size()),
                             static_cast<int>(3 * d.cols() + free_slots.size())),
        t(&times),
        data(&d),
        p0(start),
        t_span(span),
        free(std::move(free_slots)) {}

  std::array<double, 6> scaled_rates(const InputType& x) const {
    std::array<double, 6> a{};
    for (std::size_t i = 0; i < free.size(); ++i) a[free[i]] = std::exp(std::min(x(i), kMaxExponent));
    return a;
  }

  RateMatrix rates(const InputType& x) const {
    auto a = scaled_rates(x);
    for (auto& r : a) r /= t_span;
    return RateMatrix::from_array(a);
  }

  int operator()(const InputType& x, ValueType& f) const {
    const Eigen::Matrix3Xd model = predict_populations(rates(x), p0, *t);
    const Eigen::Index n = data->cols();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int i = 0; i < 3; ++i) f(3 * j + i) = model(i, j) - (*data)(i, j);
    }
    const auto a = scaled_rates(x);
    for (std::size_t i = 0; i < free.size(); ++i) f(3 * n + i) = kRidge * a[free[i]];
    return 0;
  }
};

// starting points in units of 1/t_span, ordered (UL, UD, DU, DL, LU, LD)
constexpr std::array<std::array<double, 6>, 10> kStarts = {{
    {1.0, 1.0, 1.0, 1.0, 1.0, 1.0},
    {0.1, 0.1, 0.1, 0.1, 0.1, 0.1},
    {10.0, 10.0, 10.0, 10.0, 10.0, 10.0},
    {3.0, 3.0, 0.3, 3.0, 0.3, 0.3},
    {10.0, 10.0, 0.1, 10.0, 0.1, 0.1},
    {10.0, 1.0, 1.0, 1.0, 1.0, 1.0},
    {0.3, 10.0, 0.3, 10.0, 0.3, 0.3},
    {1.0, 1.0, 0.01, 1.0, 0.01, 0.01},
    {3.0, 3.0, 3.0, 3.0, 3.0, 3.0},
    {0.3, 0.3, 0.3, 0.3, 0.3, 0.3},
}};

bool better(const RateFit& a, const RateFit& b) {
  const double tol = 1e-12 * (1.0 + std::min(a.residual, b.residual));
  if (std::abs(a.residual - b.residual) > tol) return a.residual < b.residual;
  if (a.rates.k_UL != b.rates.k_UL) return a.rates.k_UL < b.rates.k_UL;
  return a.best_start < b.best_start;
}

}  // namespace

RateFit fit_rate_matrix(std::span<const double> times, const Eigen::Matrix3Xd& populations,
                        const RateFitOptions& options) {
  const auto n = static_cast<Eigen::Index>(times.size());
  if (n < 8) throw FitError("fit_rate_matrix needs at least 8 time points");
  if (populations.cols() != n) throw FitError("fit_rate_matrix: populations/times size mismatch");
  for (Eigen::Index j = 0; j < n; ++j) {
    const double s = populations.col(j).sum();
    if (!std::isfinite(s) || std::abs(s - 1.0) > 0.02) {
      throw FitError("fit_rate_matrix: populations do not sum to 1 at sample " +
                     std::to_string(j));
    }
  }
  std::vector<double> rel(n);
  for (Eigen::Index j = 0; j < n; ++j) rel[j] = times[j] - times[0];
  const double span = rel.back();
  if (!(span > 0.0)) throw FitError("fit_rate_matrix: times must increase");

  const Eigen::Vector3d p0 = populations.col(0) / populations.col(0).sum();
  using Diff = Eigen::NumericalDiff<RateResidual, Eigen::Central>;
  // slots in as_array order: UL, UD, DU, DL, LU, LD
  std::vector<int> free{0, 4};
  if (options.dark_states) free = {0, 1, 2, 3, 4, 5};
  const auto n_free = static_cast<Eigen::Index>(free.size());
  Diff functor(RateResidual(rel, populations, p0, span, free));

  RateFit best;
  for (int s = 0; s < static_cast<int>(kStarts.size()); ++s) {
    Eigen::VectorXd x(n_free);
    for (Eigen::Index i = 0; i < n_free; ++i) x(i) = std::log(kStarts[s][free[i]]);
    Eigen::LevenbergMarquardt<Diff> lm(functor);
    lm.setMaxfev(4000);
    lm.setXtol(1e-12);
    lm.setFtol(1e-14);
    const auto status = lm.minimize(x);

    // The log parameterisation only approaches a zero rate asymptotically, so
    // rates whose removal does not raise the objective are set to exactly zero.
    Eigen::VectorXd f(functor.values());
    functor(x, f);
    for (Eigen::Index i = 0; i < n_free; ++i) {
      Eigen::VectorXd trial = x;
      trial(i) = -std::numeric_limits<double>::infinity();
      Eigen::VectorXd g(functor.values());
      functor(trial, g);
      if (g.squaredNorm() <= f.squaredNorm()) {
        x = trial;
        f = g;
      }
    }
    RateFit fit;
    fit.rates = functor.rates(x);
    fit.residual = f.head(3 * n).squaredNorm();
    fit.converged = status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                    status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters;
    fit.best_start = s;
    if (s == 0 || better(fit, best)) best = fit;
  }
  best.starts = static_cast<int>(kStarts.size());
  return best;
}

}  // namespace polarisim
