#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polarisim {

/// Conversion factors into Hartree atomic units (CODATA 2018).
struct UnitConstants {
  double hartree_per_ev = 1.0 / 27.211386245988;
  double hartree_per_wavenumber = 1.0 / 219474.6313632;
  double bohr_per_angstrom = 1.0 / 0.529177210903;
  double speed_of_light_au = 137.035999084;
  double kelvin_to_hartree = 3.166811563455608e-6;
  double au_time_per_fs = 1.0 / 2.4188843265857e-2;
};

inline constexpr UnitConstants kUnits{};

/// Physical dimension of a configuration quantity; selects the accepted unit
/// spellings.
enum class Dimension { energy, length, time, temperature, coupling, dimensionless };

class UnitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Converts `value` expressed in `unit` to atomic units. Throws UnitError for an
/// unknown or dimensionally wrong unit.
double to_atomic(double value, std::string_view unit, Dimension dim);

/// Inverse of to_atomic.
double from_atomic(double value, std::string_view unit, Dimension dim);

/// Canonical unit spelling used when serialising a quantity of `dim`.
std::string_view canonical_unit(Dimension dim);

namespace units {

inline double ev(double x) { return x * kUnits.hartree_per_ev; }
inline double to_ev(double hartree) { return hartree / kUnits.hartree_per_ev; }
inline double wavenumber(double x) { return x * kUnits.hartree_per_wavenumber; }
inline double angstrom(double x) { return x * kUnits.bohr_per_angstrom; }
inline double to_angstrom(double bohr) { return bohr / kUnits.bohr_per_angstrom; }
inline double fs(double x) { return x * kUnits.au_time_per_fs; }
inline double ps(double x) { return 1000.0 * x * kUnits.au_time_per_fs; }
inline double to_fs(double t) { return t / kUnits.au_time_per_fs; }
inline double to_ps(double t) { return t / (1000.0 * kUnits.au_time_per_fs); }
inline double kelvin(double T) { return T * kUnits.kelvin_to_hartree; }

}  // namespace units

}  // namespace polarisim
