#pragma once

#include <optional>
#include <vector>

#include "optomech/model.hpp"

// Source calibration chain for a PZT transmitter measured in a Michelson
// interferometer: S21 sweep -> displacement -> pressure at the PZT ->
// pressure at the sensor (diffraction, air absorption) -> responsivity.
namespace optomech {

struct S21Sweep {
  std::vector<double> frequencies;  // Hz, strictly increasing
  std::vector<double> s21_power;    // linear power ratio
  double reference_freq = 0.0;      // Hz, must be one of `frequencies`
  double v_ref = 0.0;               // photodetector voltage at the reference
  double v_max = 0.0;               // fringe maximum (lambda / 4 displacement)
  double drive_voltage = 0.0;       // nominal drive the spectrum is normalized to
  /// Per-point factor taking each segment to the nominal drive (e.g. 707 mV
  /// over the lower voltage used where the full drive saturated). Empty = all 1.
  std::vector<double> segment_scale;

  void validate() const;
};

struct DisplacementSpectrum {
  SpectrumSeries displacement;  // m, normalized to the nominal drive
  std::vector<bool> saturated;  // raw displacement reached lambda / 4
};

/// d(w) = (lambda / 4) (V_ref / V_max) sqrt(S21(w) / S21(w_ref)).
DisplacementSpectrum pzt_displacement(const S21Sweep& sweep, double wavelength);

/// P = pi nu d Z.
double pzt_pressure(double displacement, double frequency, const GasEnvironment& gas);

/// Standard humid-air state for absorption.
struct AirState {
  double temperature = 293.15;          // K
  double relative_humidity = 50.0;      // %
  double pressure = kStandardAtmosphere;  // Pa
};

/// User-supplied absorption curve overriding the analytic model.
struct TabulatedAbsorption {
  std::vector<double> frequencies;  // Hz, increasing
  std::vector<double> db_per_m;
};

enum class ApertureShape { Square, Circular };

struct PropagationPath {
  double distance = 0.1;         // m, PZT to sensor
  double aperture_side = 7e-3;   // m; square side, or circle diameter
  ApertureShape shape = ApertureShape::Square;
  AirState air;
  std::optional<TabulatedAbsorption> absorption_override;

  void validate() const;
};

/// Pure-tone absorption of humid air in dB/m: classical plus O2 and N2
/// vibrational relaxation (ISO 9613-1 formulation).
/// Throws Error{OutOfRange} outside -20..50 C, 0..100 %RH, p <= 200 kPa,
/// 4e-4 <= f/p <= 10 Hz/Pa.
double air_absorption_db_per_m(double frequency, const AirState& air);

/// On-axis |U / U_plane| behind an aperture at distance L (Fresnel regime).
/// Square side a: 2 |F(u)|^2 with u = (a / 2) sqrt(2 / (lambda_ac L)).
/// Circle diameter a: 2 |sin(pi (a/2)^2 / (2 lambda_ac L))|.
double diffraction_factor(const PropagationPath& path, double frequency, const GasEnvironment& gas);

/// Pressure attenuation factor exp(alpha L) >= 1.
double atmospheric_attenuation(const PropagationPath& path, double frequency);

/// P_sensor = c P_pzt / gamma.
double pressure_at_sensor(double pzt_pressure, double diffraction, double attenuation);

struct AppliedPressure {
  SpectrumSeries pzt;     // Pa
  SpectrumSeries sensor;  // Pa
  std::vector<bool> saturated;
};

/// Full chain on a sweep: displacement -> P_pzt -> P_sensor.
AppliedPressure applied_pressure(const S21Sweep& sweep, double wavelength,
                                 const PropagationPath& path, const GasEnvironment& gas);

struct Responsivity {
  SpectrumSeries values;    // V/Pa on the measured grid
  std::vector<bool> valid;  // false where the applied pressure is zero
};

/// Pointwise measured / applied. `applied` is linearly interpolated onto the
/// measured grid when the grids differ.
Responsivity responsivity(const SpectrumSeries& measured, const SpectrumSeries& applied);

}  // namespace optomech
