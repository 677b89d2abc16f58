#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"
#include "polarisim/oracle.hpp"
#include "polarisim/units.hpp"

using namespace polarisim;
using polarisim::testing::random_state;
using polarisim::testing::small_params;

namespace {

std::vector<double> expected_spectrum(const Model& m) {
  std::vector<double> e;
  for (int i = 0; i < m.basis.size(); ++i) {
    e.push_back(m.basis.e_upper[i]);
    e.push_back(m.basis.e_lower[i]);
    for (int d = 0; d < m.dark.n_dark(); ++d) e.push_back(m.basis.epsilon_k[i]);
  }
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST(Oracle, HamiltonianIsHermitian) {
  const auto p = small_params(8, 2);
  const Model m(p);
  const auto h = build_dense(m, sample_thermal(p, 1));
  EXPECT_LT((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_EQ(h.dimension(), 24);
}

TEST(Oracle, DiagonalCarriesPhononDisplacements) {
  const auto p = small_params(8, 2);
  const Model m(p);
  const auto ph = sample_thermal(p, 2);
  const auto h = build_dense(m, ph);
  for (int mm = 0; mm < 2; ++mm) {
    for (int n = 0; n < 8; ++n) {
      const int i = h.exciton_index(n, mm);
      EXPECT_NEAR(h.matrix(i, i).real(), p.epsilon0 + p.gamma * ph.q_at(n, mm), 1e-15);
    }
  }
}

TEST(Oracle, SpectrumMatchesPolaritonBasis) {
  for (int nl : {1, 2, 3}) {
    const Model m(small_params(8, nl));
    const DensePropagator dense(build_dense(m));
    const auto expect = expected_spectrum(m);
    const auto& got = dense.eigenvalues();
    ASSERT_EQ(static_cast<std::size_t>(got.size()), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(got(i), expect[i], 1e-10) << nl;
  }
}

TEST(Oracle, RabiGapAtResonance) {
  // tune eps0 so the k = 0 cavity mode is resonant with the exciton band bottom
  for (int nl : {1, 2, 3}) {
    auto p = small_params(8, nl);
    const Model probe(p);
    const int k0 = probe.geometry.grid_index_of_units(0);
    p.epsilon0 = probe.basis.omega_k[k0] + 2 * p.tau;
    const Model m(p);
    EXPECT_NEAR(m.basis.e_upper[k0] - m.basis.e_lower[k0], 2 * p.omega0_coupling, 1e-14);
    const Eigen::VectorXd ev = DensePropagator(build_dense(m)).eigenvalues();
    auto has = [&](double e) {
      return std::any_of(ev.begin(), ev.end(), [&](double x) { return std::abs(x - e) < 1e-10; });
    };
    EXPECT_TRUE(has(m.basis.e_upper[k0]));
    EXPECT_TRUE(has(m.basis.e_lower[k0]));
  }
}

TEST(Oracle, PropagationIsUnitary) {
  const auto p = small_params(8, 2);
  const Model m(p);
  const DensePropagator dense(build_dense(m, sample_thermal(p, 3)));
  const auto psi = random_state(8, 2, 3);
  EXPECT_LT(polarisim::testing::max_abs_diff(dense.propagate(psi, 0.0), psi), 1e-14);
  EXPECT_NEAR(dense.propagate(psi, 1234.5).norm2(), 1.0, 1e-12);
}

TEST(Oracle, SizeGuard) {
  const Model m(small_params(2048, 2));
  EXPECT_THROW(build_dense(m), OracleError);
}
