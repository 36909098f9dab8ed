#pragma once

#include <cmath>
#include <numbers>

// Internal unit conventions: strict SI, damping and decay rates angular (rad/s),
// reported spectra single-sided per cyclic Hz.
namespace optomech {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kBoltzmann = 1.380649e-23;      // J/K
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kStandardAtmosphere = 101325.0; // Pa

/// rad/s -> Hz
constexpr double to_cyclic(double angular) { return angular / kTwoPi; }
/// Hz -> rad/s
constexpr double to_angular(double cyclic) { return cyclic * kTwoPi; }

constexpr double mbar_to_pa(double mbar) { return mbar * 100.0; }
constexpr double pa_to_mbar(double pa) { return pa / 100.0; }

inline double db_to_power_ratio(double db) { return std::pow(10.0, db / 10.0); }
inline double power_ratio_to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// Ideal-gas number density (1/m^3) at temperature T (K) and pressure p (Pa).
constexpr double ideal_gas_number_density(double temperature, double pressure) {
  return pressure / (kBoltzmann * temperature);
}

// Spectroscopic databases quote line data in cm-based units. Every conversion
// between those and SI goes through here.
namespace spectro {

/// Wavenumber-like quantity, cm^-1 -> m^-1.
constexpr double per_cm_to_per_m(double v) { return v * 1e2; }
constexpr double per_m_to_per_cm(double v) { return v * 1e-2; }

/// Line intensity, cm^-1/(molec cm^-2) == cm/molec -> m/molec.
constexpr double line_intensity_to_si(double s_cm) { return s_cm * 1e-2; }

/// Number density, 1/m^3 -> 1/cm^3.
constexpr double per_m3_to_per_cm3(double n) { return n * 1e-6; }
constexpr double per_cm3_to_per_m3(double n) { return n * 1e6; }

}  // namespace spectro
}  // namespace optomech
