#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace polarisim {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
/// pure function of (key, counter), so any stream position can be evaluated
/// independently of worker scheduling. The generator family is fixed for the
/// 0.x releases; changing it changes every sampled trajectory.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Counter operator()(Counter ctr) const;

 private:
  Key key_;
};

/// Uniform double in (0, 1] from two 32-bit words (53 bits of mantissa).
double uniform_open0(std::uint32_t hi, std::uint32_t lo);

/// Two independent standard normals from one Philox block (Box-Muller).
std::pair<double, double> normal_pair(const Philox4x32::Counter& block);

}  // namespace polarisim
