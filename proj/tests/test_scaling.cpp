#include <gtest/gtest.h>

#include <vector>

#include "polarisim/scaling.hpp"

using namespace polarisim;

TEST(Scaling, SingleLayerReproducesPrefactors) {
  const ScalingPrefactors a{2.0, 3.0, 4.0, 5.0};
  const auto s = scaling_laws(1, default_parameters(), a);
  EXPECT_DOUBLE_EQ(s.layer_factor, 1.0);
  EXPECT_DOUBLE_EQ(s.k_fs, 2.0);
  EXPECT_DOUBLE_EQ(s.k_ul, 3.0);
  EXPECT_DOUBLE_EQ(s.k_ud, 0.0);
  EXPECT_DOUBLE_EQ(s.dark_factor, 0.0);
}

TEST(Scaling, FiveLayers) {
  const auto s = scaling_laws(5, default_parameters(), {1.0, 1.0, 1.0, 1.0});
  EXPECT_NEAR(s.k_fs, 0.2001, 5e-5);
  EXPECT_NEAR(s.k_ud, 4 * s.layer_factor, 1e-15);
  EXPECT_NEAR(s.k_dl, s.layer_factor, 1e-15);
  EXPECT_NEAR(s.dark_factor, 1 - s.layer_factor, 1e-15);
}

TEST(Scaling, UpperToDarkRisesThenSaturates) {
  std::vector<double> k;
  for (int n = 1; n <= 15; ++n) k.push_back(scaling_laws(n, default_parameters(), {0, 0, 1.0, 0}).k_ud);
  for (std::size_t i = 1; i < k.size(); ++i) EXPECT_GE(k[i], k[i - 1]);
  const double first_step = k[1] - k[0];
  for (std::size_t i = 8; i < k.size(); ++i) EXPECT_LT(k[i] - k[i - 1], 0.1 * first_step);
  EXPECT_LT(k.back(), 2.5 * k[1]);
}

TEST(Scaling, UpperToDarkPrefactorFit) {
  const auto p = default_parameters();
  const std::vector<int> layers{1, 2, 3, 5, 10};
  std::vector<double> k;
  for (int n : layers) k.push_back(scaling_laws(n, p, {0, 0, 7.5, 0}).k_ud);
  k[0] = 123.0;  // ignored: no dark states
  EXPECT_NEAR(fit_ud_prefactor(layers, k, p), 7.5, 1e-12);
  EXPECT_EQ(fit_ud_prefactor(std::vector<int>{1}, std::vector<double>{1.0}, p), 0.0);
}

TEST(Scaling, NegativePrefactorRejected) {
  EXPECT_THROW(scaling_laws(2, default_parameters(), {-1, 0, 0, 0}), std::invalid_argument);
}
