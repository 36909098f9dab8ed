#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optomech/model.hpp"

// Fluidic damping of a thin annular resonator: viscous drag and squeeze film.
//
// Characteristic lengths l are stored in the cyclic convention, i.e. already
// divided by 2 pi, so that gamma_gas / 2 pi = mu l / m holds directly.
namespace optomech {

/// Drag coefficient for a disk moving normal to its plane.
inline constexpr double kVerticalDiskDrag = 0.85;

struct DampingBudget {
  double l_drag = 0.0;
  double l_squeeze = 0.0;
  double gamma_drag = 0.0;        // rad/s
  double gamma_squeeze = 0.0;     // rad/s
  double gamma_gas_total = 0.0;   // rad/s
  double gamma_intrinsic = 0.0;   // rad/s
  double drag_coefficient = kVerticalDiskDrag;
};

/// l_drag = 6 pi xi sqrt(A m / M) / 2 pi. The mode is approximated as a
/// uniformly moving annulus carrying the effective mass.
double drag_length(const SensorGeometry& g, const MechanicalMode& mode,
                   double xi = kVerticalDiskDrag);

/// G(beta) = 1 - beta^4 + (1 - beta^2)^2 / ln(beta), with G(0) = 1.
double squeeze_geometry_factor(double beta);

/// beta' = sqrt(1 - (1 - beta^2) m / M): inner radius ratio of the moving part.
double modified_beta(const SensorGeometry& g, const MechanicalMode& mode);

/// l_squeeze = 3 pi R^4 G(beta') / (2 h^3) / 2 pi.
double squeeze_length(const SensorGeometry& g, const MechanicalMode& mode);
double squeeze_length(double major_radius, double beta_prime, double gap);

/// Substrate gap that produces the given squeeze-film length.
double gap_for_squeeze_length(const SensorGeometry& g, const MechanicalMode& mode,
                              double l_squeeze);

/// gamma such that gamma / 2 pi = mu l / m.
double gas_damping_rate(double length, const GasEnvironment& gas, const MechanicalMode& mode);

/// Inverse of gas_damping_rate: the cyclic-convention length for a rate.
double gas_length_from_rate(double gamma_gas, const GasEnvironment& gas,
                            const MechanicalMode& mode);

DampingBudget damping_budget(const SensorGeometry& g, const MechanicalMode& mode,
                             const GasEnvironment& gas, double xi = kVerticalDiskDrag);

/// Height where squeeze-film and drag lengths coincide:
/// h* = (R^4 G(beta') / (4 xi sqrt(A m / M)))^(1/3).
double crossover_height(const SensorGeometry& g, const MechanicalMode& mode,
                        double xi = kVerticalDiskDrag);

struct PressurePoint {
  double pressure = 0.0;     // Pa
  double gamma_total = 0.0;  // rad/s
};

struct DampingDecomposition {
  double gamma_intrinsic = 0.0;  // rad/s
  double gamma_gas = 0.0;        // rad/s at the reference pressure
  double reference_pressure = 0.0;
  double plateau_pressure = 0.0;
  bool ambiguous_plateau = false;
  std::vector<std::string> warnings;
};

/// Splits a static-pressure sweep into intrinsic and gas damping. The minimum
/// rate is taken as the intrinsic plateau; the reference defaults to the
/// highest pressure in the sweep.
DampingDecomposition decompose_damping(std::span<const PressurePoint> sweep,
                                       std::optional<double> reference_pressure = std::nullopt);

}  // namespace optomech
