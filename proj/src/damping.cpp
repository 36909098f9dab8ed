#include "optomech/damping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optomech {

namespace {

// Mass ratio m / M, rejecting modes heavier than the resonator.
double mass_ratio(const SensorGeometry& g, const MechanicalMode& mode) {
  mode.validate();
  const double total = derive_geometry(g).total_mass;
  const double ratio = mode.effective_mass / total;
  if (ratio > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "effective mass " << mode.effective_mass << " kg exceeds total mass " << total << " kg";
    fail(ErrorKind::InvalidMode, os.str());
  }
  return std::min(ratio, 1.0);
}

}  // namespace

double drag_length(const SensorGeometry& g, const MechanicalMode& mode, double xi) {
  if (!(xi > 0.0)) fail(ErrorKind::InvalidArgument, "drag coefficient xi must be > 0");
  const double ratio = mass_ratio(g, mode);
  const double area = derive_geometry(g).area;
  return 6.0 * kPi * xi * std::sqrt(area * ratio) / kTwoPi;
}

double squeeze_geometry_factor(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "squeeze-film factor needs 0 <= beta <= 1");
  }
  if (beta == 0.0) return 1.0;
  if (beta == 1.0) return 0.0;
  const double x = std::log(beta);
  if (x > -0.05) {
    // The closed form cancels to O(x^3) near beta = 1; use its Taylor series in ln(beta).
    static constexpr double c[] = {-4.0 / 3.0,      -8.0 / 3.0,        -136.0 / 45.0,
                                   -112.0 / 45.0,   -172.0 / 105.0,    -856.0 / 945.0,
                                   -6152.0 / 14175.0, -2608.0 / 14175.0, -32776.0 / 467775.0};
    double s = 0.0;
    for (int k = 8; k >= 0; --k) s = s * x + c[k];
    return s * x * x * x;
  }
  const double b2 = beta * beta;
  const double one_minus_b2 = (1.0 - beta) * (1.0 + beta);
  return (1.0 - b2 * b2) + one_minus_b2 * one_minus_b2 / std::log(beta);
}

double modified_beta(const SensorGeometry& g, const MechanicalMode& mode) {
  const double ratio = mass_ratio(g, mode);
  const double beta = derive_geometry(g).beta_ratio;
  return std::sqrt(std::max(0.0, 1.0 - (1.0 - beta * beta) * ratio));
}

double squeeze_length(double major_radius, double beta_prime, double gap) {
  if (!(gap > 0.0)) fail(ErrorKind::InvalidGeometry, "substrate gap must be > 0");
  if (!(major_radius > 0.0)) fail(ErrorKind::InvalidGeometry, "major radius must be > 0");
  if (!(beta_prime >= 0.0) || beta_prime >= 1.0) {
    fail(ErrorKind::Degenerate, "modified beta must lie in [0, 1): no moving area left");
  }
  const double r4 = std::pow(major_radius, 4);
  return 3.0 * kPi * r4 * squeeze_geometry_factor(beta_prime) / (2.0 * gap * gap * gap) / kTwoPi;
}

double squeeze_length(const SensorGeometry& g, const MechanicalMode& mode) {
  return squeeze_length(g.major_radius, modified_beta(g, mode), g.substrate_gap);
}

double gap_for_squeeze_length(const SensorGeometry& g, const MechanicalMode& mode,
                              double l_squeeze) {
  if (!(l_squeeze > 0.0)) fail(ErrorKind::InvalidArgument, "squeeze length must be > 0");
  const double bp = modified_beta(g, mode);
  if (bp >= 1.0) fail(ErrorKind::Degenerate, "modified beta is 1: no moving area left");
  const double r4 = std::pow(g.major_radius, 4);
  return std::cbrt(3.0 * r4 * squeeze_geometry_factor(bp) / (4.0 * l_squeeze));
}

double gas_damping_rate(double length, const GasEnvironment& gas, const MechanicalMode& mode) {
  if (!(length >= 0.0)) fail(ErrorKind::InvalidArgument, "characteristic length must be >= 0");
  if (!(mode.effective_mass > 0.0)) fail(ErrorKind::InvalidMode, "mode: effective_mass must be > 0");
  if (!(gas.viscosity >= 0.0)) fail(ErrorKind::InvalidArgument, "viscosity must be >= 0");
  return kTwoPi * gas.viscosity * length / mode.effective_mass;
}

double gas_length_from_rate(double gamma_gas, const GasEnvironment& gas,
                            const MechanicalMode& mode) {
  if (!(gas.viscosity > 0.0)) fail(ErrorKind::InvalidArgument, "viscosity must be > 0");
  return to_cyclic(gamma_gas) * mode.effective_mass / gas.viscosity;
}

DampingBudget damping_budget(const SensorGeometry& g, const MechanicalMode& mode,
                             const GasEnvironment& gas, double xi) {
  DampingBudget b;
  b.drag_coefficient = xi;
  b.l_drag = drag_length(g, mode, xi);
  b.l_squeeze = squeeze_length(g, mode);
  b.gamma_drag = gas_damping_rate(b.l_drag, gas, mode);
  b.gamma_squeeze = gas_damping_rate(b.l_squeeze, gas, mode);
  b.gamma_gas_total = b.gamma_drag + b.gamma_squeeze;
  b.gamma_intrinsic = mode.intrinsic_damping;
  return b;
}

double crossover_height(const SensorGeometry& g, const MechanicalMode& mode, double xi) {
  if (!(xi > 0.0)) fail(ErrorKind::InvalidArgument, "drag coefficient xi must be > 0");
  const double ratio = mass_ratio(g, mode);
  const double area = derive_geometry(g).area;
  const double bp = modified_beta(g, mode);
  if (bp >= 1.0) fail(ErrorKind::Degenerate, "modified beta is 1: no moving area left");
  const double r4 = std::pow(g.major_radius, 4);
  return std::cbrt(r4 * squeeze_geometry_factor(bp) / (4.0 * xi * std::sqrt(area * ratio)));
}

DampingDecomposition decompose_damping(std::span<const PressurePoint> sweep,
                                       std::optional<double> reference_pressure) {
  if (sweep.size() < 2) {
    fail(ErrorKind::InsufficientData, "damping decomposition needs at least two pressures");
  }
  std::vector<PressurePoint> pts(sweep.begin(), sweep.end());
  for (const auto& p : pts) {
    if (!(p.pressure > 0.0) || !std::isfinite(p.pressure) || !(p.gamma_total >= 0.0) ||
        !std::isfinite(p.gamma_total)) {
      fail(ErrorKind::Data, "pressure sweep entries must have p > 0 and finite gamma >= 0");
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.pressure < b.pressure; });
  const double decades = std::log10(pts.back().pressure / pts.front().pressure);
  if (decades < 3.0) {
    std::ostringstream os;
    os << "pressure sweep spans " << decades << " decades; at least 3 are needed";
    fail(ErrorKind::InsufficientData, os.str());
  }

  DampingDecomposition out;
  const auto min_it = std::min_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.gamma_total < b.gamma_total;
  });
  out.gamma_intrinsic = min_it->gamma_total;
  out.plateau_pressure = min_it->pressure;
  if (min_it != pts.begin() && min_it->gamma_total < pts.front().gamma_total) {
    out.ambiguous_plateau = true;
    out.warnings.emplace_back("minimum damping is not at the lowest pressure");
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].gamma_total < pts[i - 1].gamma_total) {
      out.ambiguous_plateau = true;
      out.warnings.emplace_back("damping is not monotone in pressure");
      break;
    }
  }

  const PressurePoint* ref = &pts.back();
  if (reference_pressure) {
    const auto it = std::find_if(pts.begin(), pts.end(), [&](const auto& p) {
      return std::abs(p.pressure - *reference_pressure) <= 1e-9 * *reference_pressure;
    });
    if (it == pts.end()) {
      fail(ErrorKind::InvalidArgument, "reference pressure is not one of the sweep points");
    }
    ref = &*it;
  }
  out.reference_pressure = ref->pressure;
  out.gamma_gas = ref->gamma_total - out.gamma_intrinsic;
  return out;
}

}  // namespace optomech
