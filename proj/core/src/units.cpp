#include "polarisim/units.hpp"

#include <array>
#include <utility>

namespace polarisim {

namespace {

struct UnitEntry {
  std::string_view name;
  Dimension dim;
  double factor;  // atomic units per one `name`
};

constexpr std::array kTable{
    UnitEntry{"au", Dimension::energy, 1.0},
    UnitEntry{"Ha", Dimension::energy, 1.0},
    UnitEntry{"hartree", Dimension::energy, 1.0},
    UnitEntry{"eV", Dimension::energy, kUnits.hartree_per_ev},
    UnitEntry{"meV", Dimension::energy, 1e-3 * kUnits.hartree_per_ev},
    UnitEntry{"cm-1", Dimension::energy, kUnits.hartree_per_wavenumber},
    UnitEntry{"au", Dimension::length, 1.0},
    UnitEntry{"bohr", Dimension::length, 1.0},
    UnitEntry{"angstrom", Dimension::length, kUnits.bohr_per_angstrom},
    UnitEntry{"A", Dimension::length, kUnits.bohr_per_angstrom},
    UnitEntry{"nm", Dimension::length, 10.0 * kUnits.bohr_per_angstrom},
    UnitEntry{"au", Dimension::time, 1.0},
    UnitEntry{"fs", Dimension::time, kUnits.au_time_per_fs},
    UnitEntry{"ps", Dimension::time, 1000.0 * kUnits.au_time_per_fs},
    UnitEntry{"K", Dimension::temperature, 1.0},
    UnitEntry{"au", Dimension::coupling, 1.0},
    UnitEntry{"", Dimension::dimensionless, 1.0},
};

double factor_for(std::string_view unit, Dimension dim) {
  for (const auto& e : kTable) {
    if (e.dim == dim && e.name == unit) return e.factor;
  }
  throw UnitError("unit '" + std::string(unit) + "' is not valid for this quantity (expected " +
                  std::string(canonical_unit(dim)) + "-compatible unit)");
}

}  // namespace

double to_atomic(double value, std::string_view unit, Dimension dim) {
  return value * factor_for(unit, dim);
}

double from_atomic(double value, std::string_view unit, Dimension dim) {
  return value / factor_for(unit, dim);
}

std::string_view canonical_unit(Dimension dim) {
  switch (dim) {
    case Dimension::energy: return "eV";
    case Dimension::length: return "angstrom";
    case Dimension::time: return "fs";
    case Dimension::temperature: return "K";
    case Dimension::coupling: return "au";
    case Dimension::dimensionless: return "";
  }
  return "";
}

}  // namespace polarisim
