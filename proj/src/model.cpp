#include "optomech/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optomech {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGeometry: return "invalid-geometry";
    case ErrorKind::InvalidMode: return "invalid-mode";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Config: return "config-error";
    case ErrorKind::Data: return "data-error";
    case ErrorKind::Diverged: return "integration-diverged";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGeometry:
    case ErrorKind::InvalidMode:
    case ErrorKind::InvalidArgument:
    case ErrorKind::OutOfRange:
    case ErrorKind::Config:
      return 2;
    case ErrorKind::Degenerate:
    case ErrorKind::Singular:
    case ErrorKind::InsufficientData:
    case ErrorKind::Data:
      return 3;
    case ErrorKind::Diverged:
      return 4;
  }
  return 1;
}

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void SensorGeometry::validate() const {
  if (!positive(major_radius) || !positive(thickness) || !positive(density) ||
      !positive(substrate_gap)) {
    fail(ErrorKind::InvalidGeometry,
         "geometry: major_radius, thickness, density and substrate_gap must be > 0");
  }
  if (!(minor_radius >= 0.0) || !(minor_radius < major_radius)) {
    fail(ErrorKind::InvalidGeometry, "geometry: require 0 <= minor_radius < major_radius");
  }
  if (!(active_fraction > 0.0 && active_fraction <= 1.0)) {
    fail(ErrorKind::InvalidGeometry, "geometry: active_fraction must lie in (0, 1]");
  }
}

DerivedGeometry derive_geometry(const SensorGeometry& g) {
  g.validate();
  DerivedGeometry d;
  const double R = g.major_radius;
  const double r = g.minor_radius;
  d.area = kPi * (R * R - r * r);
  d.total_mass = g.density * g.thickness * d.area;
  d.beta_ratio = r / R;
  return d;
}

double sensing_area(const SensorGeometry& g, bool apply_active_fraction) {
  const double a = derive_geometry(g).area;
  return apply_active_fraction ? a * g.active_fraction : a;
}

double MechanicalMode::overlap_magnitude() const { return std::abs(overlap); }

void MechanicalMode::validate() const {
  if (!positive(effective_mass)) fail(ErrorKind::InvalidMode, "mode: effective_mass must be > 0");
  if (!positive(resonance_freq)) fail(ErrorKind::InvalidMode, "mode: resonance_freq must be > 0");
  if (!(intrinsic_damping >= 0.0) || !(gas_damping >= 0.0) || !std::isfinite(intrinsic_damping) ||
      !std::isfinite(gas_damping)) {
    fail(ErrorKind::InvalidMode, "mode: damping rates must be finite and >= 0");
  }
  if (!(std::abs(overlap) <= 1.0)) fail(ErrorKind::InvalidMode, "mode: |overlap| must be <= 1");
  if (!(participation_ratio >= 0.0) || !std::isfinite(participation_ratio)) {
    fail(ErrorKind::InvalidMode, "mode: participation_ratio must be >= 0");
  }
}

void OpticalCavity::validate() const {
  if (!positive(intrinsic_loss) || !positive(input_coupling)) {
    fail(ErrorKind::InvalidArgument, "cavity: intrinsic_loss and input_coupling must be > 0");
  }
  if (!(photon_number >= 0.0)) fail(ErrorKind::InvalidArgument, "cavity: photon_number must be >= 0");
  if (!positive(wavelength)) fail(ErrorKind::InvalidArgument, "cavity: wavelength must be > 0");
  if (!std::isfinite(detuning)) fail(ErrorKind::InvalidArgument, "cavity: detuning must be finite");
}

void GasEnvironment::validate() const {
  for (double v : {viscosity, temperature, density, sound_speed, acoustic_impedance, heat_capacity,
                   expansion_coeff, static_pressure}) {
    if (!positive(v)) fail(ErrorKind::InvalidArgument, "gas: all properties must be > 0");
  }
}

SpectrumSeries::SpectrumSeries(std::vector<double> axis, Real values, std::string unit,
                               SpectrumConvention convention, std::string axis_unit)
    : axis_(std::move(axis)),
      values_(std::move(values)),
      unit_(std::move(unit)),
      convention_(convention),
      axis_unit_(std::move(axis_unit)) {
  check();
}

SpectrumSeries::SpectrumSeries(std::vector<double> axis, Complex values, std::string unit,
                               SpectrumConvention convention, std::string axis_unit)
    : axis_(std::move(axis)),
      values_(std::move(values)),
      unit_(std::move(unit)),
      convention_(convention),
      axis_unit_(std::move(axis_unit)) {
  check();
}

void SpectrumSeries::check() const {
  if (unit_.empty() || axis_unit_.empty()) {
    fail(ErrorKind::InvalidArgument, "spectrum: unit tags must not be empty");
  }
  const std::size_t n = std::visit([](const auto& v) { return v.size(); }, values_);
  if (n != axis_.size()) {
    std::ostringstream os;
    os << "spectrum: " << axis_.size() << " axis points but " << n << " values";
    fail(ErrorKind::InvalidArgument, os.str());
  }
  for (std::size_t i = 1; i < axis_.size(); ++i) {
    if (!(axis_[i] > axis_[i - 1])) {
      fail(ErrorKind::InvalidArgument, "spectrum: axis must be strictly increasing");
    }
  }
}

const SpectrumSeries::Real& SpectrumSeries::real() const {
  if (is_complex()) fail(ErrorKind::InvalidArgument, "spectrum: series holds complex samples");
  return std::get<Real>(values_);
}

const SpectrumSeries::Complex& SpectrumSeries::complex() const {
  if (!is_complex()) fail(ErrorKind::InvalidArgument, "spectrum: series holds real samples");
  return std::get<Complex>(values_);
}

std::vector<double> SpectrumSeries::magnitude() const {
  std::vector<double> out(size());
  if (is_complex()) {
    const auto& c = complex();
    std::transform(c.begin(), c.end(), out.begin(), [](auto z) { return std::abs(z); });
  } else {
    const auto& r = real();
    std::transform(r.begin(), r.end(), out.begin(), [](double v) { return std::abs(v); });
  }
  return out;
}

std::vector<double> interpolate(const SpectrumSeries& s, std::span<const double> axis) {
  const auto& x = s.axis();
  const auto& y = s.real();
  if (x.empty()) fail(ErrorKind::InvalidArgument, "interpolate: empty series");
  std::vector<double> out;
  out.reserve(axis.size());
  for (double q : axis) {
    if (q <= x.front()) {
      out.push_back(y.front());
    } else if (q >= x.back()) {
      out.push_back(y.back());
    } else {
      const auto it = std::upper_bound(x.begin(), x.end(), q);
      const std::size_t hi = static_cast<std::size_t>(it - x.begin());
      const std::size_t lo = hi - 1;
      const double t = (q - x[lo]) / (x[hi] - x[lo]);
      out.push_back(y[lo] + t * (y[hi] - y[lo]));
    }
  }
  return out;
}

}  // namespace optomech
