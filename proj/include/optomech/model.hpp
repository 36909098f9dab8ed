#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "optomech/error.hpp"
#include "optomech/units.hpp"

namespace optomech {

/// Annular (spoked) disk resonator suspended above a substrate. Lengths in m.
struct SensorGeometry {
  double major_radius = 0.0;
  double minor_radius = 0.0;  // inner radius of the annulus
  double thickness = 0.0;
  double density = 0.0;       // kg/m^3
  double substrate_gap = 0.0; // height above the substrate
  double active_fraction = 1.0;

  /// Throws Error{InvalidGeometry} when any invariant is broken.
  void validate() const;
};

struct DerivedGeometry {
  double area = 0.0;        // m^2, pi (R^2 - r^2)
  double total_mass = 0.0;  // kg
  double beta_ratio = 0.0;  // r / R
};

DerivedGeometry derive_geometry(const SensorGeometry& g);

/// Area used for pressure-to-force conversion. The active fraction only enters
/// when asked for explicitly.
double sensing_area(const SensorGeometry& g, bool apply_active_fraction = false);

/// Single mechanical mode. All rates angular (rad/s).
struct MechanicalMode {
  double resonance_freq = 0.0;
  double intrinsic_damping = 0.0;
  double gas_damping = 0.0;
  double effective_mass = 0.0;       // kg
  double overlap = 1.0;              // zeta
  double participation_ratio = 1.0;  // r

  double total_damping() const { return intrinsic_damping + gas_damping; }
  double spring_constant() const {
    return effective_mass * resonance_freq * resonance_freq;
  }
  double quality_factor() const { return resonance_freq / total_damping(); }

  /// Overlap sign is not physical for noise budgets; reports use |zeta|.
  double overlap_magnitude() const;

  void validate() const;
};

/// Whispering-gallery cavity probed through a coupler. Rates in rad/s.
struct OpticalCavity {
  double intrinsic_loss = 0.0;        // kappa_l
  double input_coupling = 0.0;        // kappa_in,0
  double detuning = 0.0;              // Delta (operating point)
  double dispersive_coupling = 0.0;   // g_disp, rad/s per m
  double dissipative_coupling = 0.0;  // g_diss, 1/m
  double vacuum_coupling = 0.0;       // g_0, rad/s
  double photon_number = 0.0;         // N
  double wavelength = 1555e-9;        // m

  double total_decay() const { return input_coupling + intrinsic_loss; }
  double optical_frequency() const { return kTwoPi * kSpeedOfLight / wavelength; }
  double loaded_q() const { return optical_frequency() / total_decay(); }

  void validate() const;
};

struct GasEnvironment {
  double viscosity = 1.8e-5;          // kg/(m s)
  double temperature = 300.0;         // K
  double density = 413.0 / 343.0;     // kg/m^3, Z / v for the default air
  double sound_speed = 343.0;         // m/s
  double acoustic_impedance = 413.0;  // Pa s/m
  double heat_capacity = 1005.0;      // J/(kg K)
  double expansion_coeff = 0.0034;    // 1/K
  double static_pressure = kStandardAtmosphere;

  static GasEnvironment air() { return {}; }
  void validate() const;
};

enum class SpectrumConvention {
  SingleSidedPerHz,  // PSD-like quantities, frequency axis in cyclic Hz
  PointValues,       // pointwise samples (responses, calibrations)
};

/// Axis-indexed real or complex samples with explicit unit tags.
class SpectrumSeries {
 public:
  using Real = std::vector<double>;
  using Complex = std::vector<std::complex<double>>;

  SpectrumSeries(std::vector<double> axis, Real values, std::string unit,
                 SpectrumConvention convention = SpectrumConvention::SingleSidedPerHz,
                 std::string axis_unit = "Hz");
  SpectrumSeries(std::vector<double> axis, Complex values, std::string unit,
                 SpectrumConvention convention = SpectrumConvention::PointValues,
                 std::string axis_unit = "Hz");

  const std::vector<double>& axis() const { return axis_; }
  const std::string& axis_unit() const { return axis_unit_; }
  const std::string& unit() const { return unit_; }
  SpectrumConvention convention() const { return convention_; }
  std::size_t size() const { return axis_.size(); }

  bool is_complex() const { return std::holds_alternative<Complex>(values_); }
  /// Throws if the series holds complex samples.
  const Real& real() const;
  const Complex& complex() const;
  /// |value| for either storage.
  std::vector<double> magnitude() const;

 private:
  void check() const;

  std::vector<double> axis_;
  std::variant<Real, Complex> values_;
  std::string unit_;
  SpectrumConvention convention_;
  std::string axis_unit_;
};

/// Linear interpolation of a real series onto `axis` (clamped at the ends).
std::vector<double> interpolate(const SpectrumSeries& s, std::span<const double> axis);

}  // namespace optomech
