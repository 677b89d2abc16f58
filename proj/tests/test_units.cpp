#include <gtest/gtest.h>

#include "polarisim/units.hpp"

using namespace polarisim;

TEST(Units, ElectronVoltToHartree) {
  EXPECT_NEAR(to_atomic(3.2, "eV", Dimension::energy), 0.11759784, 1e-8);
  EXPECT_NEAR(units::ev(1.0) * 27.211386245988, 1.0, 1e-15);
}

TEST(Units, Wavenumbers) {
  EXPECT_NEAR(to_atomic(400.0, "cm-1", Dimension::energy), 1.822534101e-3, 1e-12);
  EXPECT_NEAR(to_atomic(720.0, "cm-1", Dimension::energy), 3.280561382e-3, 1e-12);
  EXPECT_NEAR(to_atomic(720.0, "cm-1", Dimension::energy), 3.2806e-3, 5e-8);
}

TEST(Units, LengthsAndTimes) {
  EXPECT_NEAR(to_atomic(12.0, "angstrom", Dimension::length), 22.676713, 1e-6);
  EXPECT_NEAR(to_atomic(1.2, "nm", Dimension::length), 22.676713, 1e-6);
  EXPECT_NEAR(to_atomic(1.0, "fs", Dimension::time), 41.341373, 1e-6);
  EXPECT_NEAR(to_atomic(0.3, "ps", Dimension::time), 12402.412, 1e-3);
}

TEST(Units, TemperatureIsKelvin) {
  EXPECT_DOUBLE_EQ(to_atomic(300.0, "K", Dimension::temperature), 300.0);
  EXPECT_NEAR(units::kelvin(300.0), 9.500434690e-4, 1e-12);
}

TEST(Units, RoundTripEveryUnit) {
  const std::vector<std::pair<const char*, Dimension>> cases = {
      {"au", Dimension::energy},  {"Ha", Dimension::energy},     {"eV", Dimension::energy},
      {"meV", Dimension::energy}, {"cm-1", Dimension::energy},   {"bohr", Dimension::length},
      {"A", Dimension::length},   {"nm", Dimension::length},     {"fs", Dimension::time},
      {"ps", Dimension::time},    {"au", Dimension::time},       {"K", Dimension::temperature},
      {"au", Dimension::coupling}};
  for (const auto& [unit, dim] : cases) {
    const double x = 1.2345;
    EXPECT_NEAR(from_atomic(to_atomic(x, unit, dim), unit, dim), x, 1e-14) << unit;
  }
}

TEST(Units, RejectsUnknownOrMismatchedUnits) {
  EXPECT_THROW(to_atomic(1.0, "furlong", Dimension::length), UnitError);
  EXPECT_THROW(to_atomic(1.0, "eV", Dimension::length), UnitError);
  EXPECT_THROW(to_atomic(1.0, "fs", Dimension::energy), UnitError);
}
