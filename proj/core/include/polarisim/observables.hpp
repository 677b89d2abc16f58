#pragma once

#include <optional>
#include <vector>

#include "polarisim/model.hpp"
#include "polarisim/propagator.hpp"

namespace polarisim {

/// Per-k upper/lower polariton populations (grid order) and the dark total.
struct KResolvedPopulations {
  std::vector<double> p_upper_k;
  std::vector<double> p_lower_k;
  double dark_total = 0.0;   // 1 - P_+ - P_- for a normalised state
  double dark_direct = 0.0;  // sum_k sum_d |<k,d|psi>|^2

  double upper() const;
  double lower() const;
};

/// Below this lower-polariton population the relative window populations are
/// reported as missing; it sits well above the roundoff of a pure UP state.
inline constexpr double kMinLowerPopulation = 1e-12;

/// Momentum interval |k - k_center| <= halfwidth.
struct WindowSpec {
  double k_center = 0.0;
  double halfwidth = 0.0;

  bool contains(double k) const;
};

WindowSpec make_window(const Geometry& g, double k_center, int halfwidth_units);

KResolvedPopulations band_populations(const KSpaceState& psik, const PolaritonBasis& basis,
                                      const CouplingWeights& w, const DarkBasis& dark);

KResolvedPopulations band_populations(const WaveState& psi, const Model& model);

struct WindowPopulations {
  double p_in = 0.0;
  double p_out = 0.0;
  std::optional<double> in_relative;   // p_in / P_-, absent when P_- < kMinLowerPopulation
  std::optional<double> out_relative;  // p_out / P_-
};

WindowPopulations window_populations(const KResolvedPopulations& kres, const Geometry& g,
                                     const WindowSpec& window);

}  // namespace polarisim
