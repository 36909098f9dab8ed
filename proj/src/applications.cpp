#include "optomech/applications.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optomech {

void LaserPulse::validate() const {
  if (!(energy > 0.0) || !(duration > 0.0) || !(beam_radius > 0.0)) {
    fail(ErrorKind::InvalidArgument, "laser pulse energy, duration and beam radius must be > 0");
  }
}

void GasLine::validate() const {
  if (!(line_intensity > 0.0) || !(linewidth > 0.0)) {
    fail(ErrorKind::InvalidArgument, "line intensity and linewidth must be > 0");
  }
}

double line_absorption(const GasLine& line, double number_density) {
  line.validate();
  if (!(number_density >= 0.0)) fail(ErrorKind::InvalidArgument, "number density must be >= 0");
  const double s = spectro::line_intensity_to_si(line.line_intensity);
  const double g = spectro::per_cm_to_per_m(line.linewidth);
  return number_density * s / (2.0 * g);
}

PhotoacousticSignal photoacoustic_pressure(const GasEnvironment& gas, const LaserPulse& pulse,
                                           double absorption, double distance, double path_length) {
  pulse.validate();
  if (!(distance > 0.0)) fail(ErrorKind::InvalidArgument, "photoacoustic distance must be > 0");
  if (!(absorption >= 0.0)) fail(ErrorKind::InvalidArgument, "absorption must be >= 0");
  PhotoacousticSignal out;
  if (!pulse.short_pulse(gas)) {
    out.warnings.push_back("beam radius exceeds v*tau: short-pulse source model not valid");
  }
  if (path_length > 0.0 && absorption * path_length > 0.1) {
    std::ostringstream os;
    os << "alpha*l = " << absorption * path_length << ": medium is not optically thin";
    out.warnings.push_back(os.str());
  }
  out.displacement = gas.expansion_coeff * pulse.energy * absorption /
                     (kTwoPi * gas.density * gas.heat_capacity * distance);
  out.peak_pressure = gas.sound_speed * gas.density * out.displacement / pulse.duration;
  return out;
}

double effective_pressure(double peak_pressure, double duration, double omega_m) {
  if (!(peak_pressure >= 0.0) || !(duration > 0.0) || !(omega_m > 0.0)) {
    fail(ErrorKind::InvalidArgument, "effective pressure needs P >= 0, tau > 0, w_m > 0");
  }
  return peak_pressure * duration * omega_m / kTwoPi;
}

ConcentrationLimit min_concentration(const GasEnvironment& gas, const GasLine& line,
                                     const LaserPulse& pulse, double min_effective_pressure,
                                     double distance, double omega_m) {
  line.validate();
  pulse.validate();
  if (!(distance > 0.0) || !(omega_m > 0.0) || !(min_effective_pressure >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "concentration limit needs r > 0, w_m > 0, P_eff >= 0");
  }
  const double s = spectro::line_intensity_to_si(line.line_intensity);
  const double g = spectro::per_cm_to_per_m(line.linewidth);
  const double n = 8.0 * kPi * kPi * g * gas.heat_capacity * distance * min_effective_pressure /
                   (gas.sound_speed * gas.expansion_coeff * pulse.energy * s * omega_m);
  ConcentrationLimit out;
  out.number_density = spectro::per_m3_to_per_cm3(n);
  out.ppb = 1e9 * n / ideal_gas_number_density(gas.temperature, gas.static_pressure);
  return out;
}

double cell_vibration_pressure(double frequency, double displacement, const GasEnvironment& gas) {
  if (!(frequency >= 0.0) || !(displacement >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "cell vibration needs frequency and displacement >= 0");
  }
  return kPi * frequency * gas.acoustic_impedance * displacement;
}

double detectable_displacement(double nep, double frequency, const GasEnvironment& gas,
                               double bandwidth) {
  if (!(nep >= 0.0) || !(frequency > 0.0) || !(bandwidth > 0.0)) {
    fail(ErrorKind::InvalidArgument, "detectable displacement needs nep >= 0, nu > 0, B > 0");
  }
  return nep * std::sqrt(bandwidth) / (kPi * frequency * gas.acoustic_impedance);
}

double cooperativity(const OpticalCavity& cavity, double mechanical_damping) {
  const double kappa = cavity.total_decay();
  if (!(kappa > 0.0) || !(mechanical_damping > 0.0)) {
    fail(ErrorKind::InvalidArgument, "cooperativity needs kappa and gamma > 0");
  }
  if (!(cavity.photon_number >= 0.0)) fail(ErrorKind::InvalidArgument, "photon number must be >= 0");
  const double g0 = cavity.vacuum_coupling;
  return 4.0 * g0 * g0 * cavity.photon_number / (kappa * mechanical_damping);
}

double cooled_linewidth(double damping, double cooperativity) {
  if (!(cooperativity >= 0.0) || !(damping >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "cooled linewidth needs gamma >= 0 and C >= 0");
  }
  return damping * (1.0 + cooperativity);
}

double flattened_peak(double peak, double damping, double cooled_damping) {
  if (!(cooled_damping > 0.0)) fail(ErrorKind::InvalidArgument, "cooled damping must be > 0");
  return peak * damping / cooled_damping;
}

double ModeshapeGrid::total_area() const {
  double a = 0.0;
  for (double c : cell_area) a += c;
  return a;
}

void ModeshapeGrid::validate() const {
  const std::size_t n = u.size();
  if (n == 0) fail(ErrorKind::Data, "modeshape grid is empty");
  if (x.size() != n || y.size() != n || cell_area.size() != n) {
    fail(ErrorKind::Data, "modeshape columns differ in length");
  }
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cell_area[i] > 0.0)) fail(ErrorKind::Data, "modeshape cell areas must be > 0");
    if (!std::isfinite(u[i])) fail(ErrorKind::Data, "modeshape contains non-finite displacement");
    peak = std::max(peak, std::abs(u[i]));
  }
  if (std::abs(peak - 1.0) > 1e-9) {
    fail(ErrorKind::Data, "modeshape must be normalized to max |u| = 1");
  }
}

void ModeshapeGrid::validate(const SensorGeometry& geometry) const {
  validate();
  const double a = derive_geometry(geometry).area;
  if (std::abs(total_area() - a) > 1e-6 * a) {
    fail(ErrorKind::Data, "modeshape cell areas do not add up to the resonator area");
  }
}

namespace {

template <class Profile>
ModeshapeGrid annular_grid(const SensorGeometry& geometry, std::size_t nr, std::size_t nt,
                           Profile profile) {
  geometry.validate();
  if (nr == 0 || nt == 0) fail(ErrorKind::InvalidArgument, "modeshape grid needs cells");
  const double ri = geometry.minor_radius;
  const double ro = geometry.major_radius;
  const double dth = kTwoPi / static_cast<double>(nt);
  ModeshapeGrid g;
  g.x.reserve(nr * nt);
  g.y.reserve(nr * nt);
  g.u.reserve(nr * nt);
  g.cell_area.reserve(nr * nt);
  double peak = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    const double r0 = ri + (ro - ri) * static_cast<double>(i) / static_cast<double>(nr);
    const double r1 = ri + (ro - ri) * static_cast<double>(i + 1) / static_cast<double>(nr);
    const double rc = 0.5 * (r0 + r1);
    const double area = 0.5 * (r1 * r1 - r0 * r0) * dth;
    const double u = profile(rc);
    peak = std::max(peak, std::abs(u));
    for (std::size_t j = 0; j < nt; ++j) {
      const double th = (static_cast<double>(j) + 0.5) * dth;
      g.x.push_back(rc * std::cos(th));
      g.y.push_back(rc * std::sin(th));
      g.u.push_back(u);
      g.cell_area.push_back(area);
    }
  }
  if (!(peak > 0.0)) fail(ErrorKind::InvalidArgument, "modeshape profile vanishes everywhere");
  for (double& u : g.u) u /= peak;
  return g;
}

}  // namespace

ModeshapeGrid flapping_modeshape(const SensorGeometry& geometry, double node_radius,
                                 std::size_t radial_cells, std::size_t angular_cells) {
  const double ri = geometry.minor_radius;
  const double ro = geometry.major_radius;
  if (!(node_radius > ri && node_radius < ro)) {
    fail(ErrorKind::InvalidArgument, "node radius must lie inside the annulus");
  }
  const double cn = std::cos(kPi * (node_radius - ri) / (ro - ri));
  return annular_grid(geometry, radial_cells, angular_cells,
                      [&](double rho) { return cn - std::cos(kPi * (rho - ri) / (ro - ri)); });
}

ModeshapeGrid piston_modeshape(const SensorGeometry& geometry, std::size_t radial_cells,
                               std::size_t angular_cells) {
  return annular_grid(geometry, radial_cells, angular_cells, [](double) { return 1.0; });
}

double mode_overlap(const ModeshapeGrid& shape, const std::vector<double>& pressure_field) {
  shape.validate();
  if (pressure_field.size() != shape.size()) {
    fail(ErrorKind::InvalidArgument, "pressure field and modeshape grids do not match");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    sum += shape.u[i] * pressure_field[i] * shape.cell_area[i];
  }
  return sum / shape.total_area();
}

double effective_mass(const ModeshapeGrid& shape, double thickness, double density) {
  shape.validate();
  if (!(thickness > 0.0) || !(density > 0.0)) {
    fail(ErrorKind::InvalidArgument, "effective mass needs thickness and density > 0");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < shape.size(); ++i) sum += std::abs(shape.u[i]) * shape.cell_area[i];
  return thickness * density * sum;
}

double rayleigh_length(double beam_radius, double wavelength) {
  if (!(beam_radius > 0.0) || !(wavelength > 0.0)) {
    fail(ErrorKind::InvalidArgument, "Rayleigh length needs w and lambda > 0");
  }
  return kPi * beam_radius * beam_radius / wavelength;
}

double beam_radius_from_rayleigh(double rayleigh_length, double wavelength) {
  if (!(rayleigh_length > 0.0) || !(wavelength > 0.0)) {
    fail(ErrorKind::InvalidArgument, "beam radius needs z_R and lambda > 0");
  }
  return std::sqrt(rayleigh_length * wavelength / kPi);
}

}  // namespace optomech
