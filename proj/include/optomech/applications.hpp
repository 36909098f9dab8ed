#pragma once

#include <string>
#include <vector>

#include "optomech/model.hpp"

namespace optomech {

struct LaserPulse {
  double energy = 0.0;       // J
  double duration = 0.0;     // s
  double beam_radius = 0.0;  // m

  void validate() const;
  /// Short-pulse regime: the beam radius is below the acoustic transit length.
  bool short_pulse(const GasEnvironment& gas) const { return beam_radius < gas.sound_speed * duration; }
};

/// Absorption line in database units.
struct GasLine {
  double line_intensity = 0.0;  // cm^-1 / (molec cm^-2)
  double linewidth = 0.0;       // cm^-1
  double wavelength = 0.0;      // m

  void validate() const;
};

/// Peak absorption coefficient (1/m) of a line at number density n (1/m^3):
/// alpha = n S / (2 gamma_G).
double line_absorption(const GasLine& line, double number_density);

struct PhotoacousticSignal {
  double displacement = 0.0;  // U_s, m
  double peak_pressure = 0.0; // Pa
  std::vector<std::string> warnings;
};

/// U_s = beta E alpha / (2 pi rho C_p r), P_peak = v rho U_s / tau.
/// `path_length` (m) feeds the thin-medium check alpha l << 1; zero skips it.
PhotoacousticSignal photoacoustic_pressure(const GasEnvironment& gas, const LaserPulse& pulse,
                                           double absorption, double distance,
                                           double path_length = 0.0);

/// Fraction of a short pulse's peak pressure seen by a resonator at w_m:
/// P_eff = P_peak tau w_m / (2 pi).
double effective_pressure(double peak_pressure, double duration, double omega_m);

struct ConcentrationLimit {
  double number_density = 0.0;  // molec/cm^3
  double ppb = 0.0;
};

/// c_min = 8 pi^2 gamma_G C_p r P_eff,min / (v beta E S w_m), ppb against the
/// ideal-gas density at the gas temperature and static pressure.
ConcentrationLimit min_concentration(const GasEnvironment& gas, const GasLine& line,
                                     const LaserPulse& pulse, double min_effective_pressure,
                                     double distance, double omega_m);

/// Pressure radiated by a surface vibrating with amplitude d: P = pi nu Z d.
double cell_vibration_pressure(double frequency, double displacement, const GasEnvironment& gas);

/// d_min = nep sqrt(B) / (pi nu Z).
double detectable_displacement(double nep, double frequency, const GasEnvironment& gas,
                               double bandwidth = 1.0);

/// C = 4 g_0^2 N / (kappa gamma), gamma the mechanical damping rate (rad/s).
double cooperativity(const OpticalCavity& cavity, double mechanical_damping);

/// Upper bound on the optically damped linewidth, gamma (1 + C).
double cooled_linewidth(double damping, double cooperativity);

/// Peak PSD after broadening gamma -> gamma_eff with the thermomechanical area
/// held fixed.
double flattened_peak(double peak, double damping, double cooled_damping);

struct ModeshapeGrid {
  std::vector<double> x, y;       // m
  std::vector<double> u;          // normalized, max |u| = 1
  std::vector<double> cell_area;  // m^2

  std::size_t size() const { return u.size(); }
  double total_area() const;
  /// Column lengths, positive cell areas and max |u| = 1 within 1e-9.
  void validate() const;
  /// Also checks the total cell area against the resonator area (1e-6 relative).
  void validate(const SensorGeometry& geometry) const;
};

/// Polar grid over the annulus r <= rho <= R with an axisymmetric flapping
/// profile u(rho) = cos(pi s_n) - cos(pi s), s = (rho - r) / (R - r), which
/// vanishes at the node radius. Normalized to max |u| = 1.
ModeshapeGrid flapping_modeshape(const SensorGeometry& geometry, double node_radius,
                                 std::size_t radial_cells = 200, std::size_t angular_cells = 64);

/// Rigid piston (u = 1) on the same polar grid.
ModeshapeGrid piston_modeshape(const SensorGeometry& geometry, std::size_t radial_cells = 200,
                               std::size_t angular_cells = 64);

/// zeta = (1 / A) sum u dp dA, with dp the pressure normalized to its antinode.
/// The 1/A makes a piston under a plane wave give exactly 1.
double mode_overlap(const ModeshapeGrid& shape, const std::vector<double>& pressure_field);

/// m = t rho sum |u| dA.
double effective_mass(const ModeshapeGrid& shape, double thickness, double density);

/// z_R = pi w^2 / lambda.
double rayleigh_length(double beam_radius, double wavelength);
/// w = sqrt(z_R lambda / pi).
double beam_radius_from_rayleigh(double rayleigh_length, double wavelength);

}  // namespace optomech
