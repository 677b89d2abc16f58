#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "polarisim/exp_fit.hpp"

using namespace polarisim;

namespace {

void synth(double a, double k, double b, double t0, double t1, int n, std::vector<double>& t,
           std::vector<double>& y) {
  t.resize(n);
  y.resize(n);
  for (int i = 0; i < n; ++i) {
    t[i] = t0 + (t1 - t0) * i / (n - 1);
    y[i] = a * std::exp(-k * t[i]) + b;
  }
}

}  // namespace

TEST(ExpFit, ExactRoundTrip) {
  std::vector<double> t, y;
  synth(0.8, 5.0, 0.2, 0.0, 1.0, 101, t, y);
  const auto f = fit_exponential(t, y);
  EXPECT_TRUE(f.converged);
  EXPECT_FALSE(f.non_decaying);
  EXPECT_NEAR(f.a, 0.8, 0.004);
  EXPECT_NEAR(f.K, 5.0, 0.025);
  EXPECT_NEAR(f.b, 0.2, 0.001);
}

TEST(ExpFit, OffsetTimeAxisAndLargeRate) {
  std::vector<double> t, y;
  synth(0.5, 40.0, 0.1, 0.01, 0.3, 59, t, y);
  const auto f = fit_exponential(t, y);
  EXPECT_NEAR(f.K, 40.0, 0.2);
  EXPECT_NEAR(f.a, 0.5, 0.0025);
  EXPECT_NEAR(f(0.05), 0.5 * std::exp(-2.0) + 0.1, 1e-8);
}

TEST(ExpFit, RisingApproach) {
  std::vector<double> t, y;
  synth(-0.6, 3.0, 0.9, 0.0, 2.0, 80, t, y);
  const auto f = fit_exponential(t, y);
  EXPECT_NEAR(f.K, 3.0, 0.015);
  EXPECT_NEAR(f.a, -0.6, 0.003);
}

TEST(ExpFit, NoisyRoundTrip) {
  std::vector<double> t, y;
  synth(0.8, 5.0, 0.2, 0.0, 1.0, 101, t, y);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (auto& v : y) v += noise(rng);
  const auto f = fit_exponential(t, y);
  EXPECT_NEAR(f.K, 5.0, 0.5);
  EXPECT_NEAR(f.a, 0.8, 0.08);
  EXPECT_NEAR(f.b, 0.2, 0.02);
}

TEST(ExpFit, ConstantSeries) {
  const std::vector<double> t{0, 1, 2, 3, 4, 5};
  const std::vector<double> y(6, 0.37);
  const auto f = fit_exponential(t, y);
  EXPECT_EQ(f.K, 0.0);
  EXPECT_TRUE(f.non_decaying);
  EXPECT_NEAR(f.b + f.a, 0.37, 1e-15);
}

TEST(ExpFit, LinearDriftIsFlaggedNonDecaying) {
  std::vector<double> t(40), y(40);
  for (int i = 0; i < 40; ++i) {
    t[i] = i;
    y[i] = 1.0 + 1e-3 * i;
  }
  const auto f = fit_exponential(t, y);
  EXPECT_TRUE(f.non_decaying);
  EXPECT_EQ(f.K, 0.0);
}

TEST(ExpFit, NeedsFivePoints) {
  const std::vector<double> t{0, 1, 2, 3};
  EXPECT_THROW(fit_exponential(t, t), std::invalid_argument);
}
