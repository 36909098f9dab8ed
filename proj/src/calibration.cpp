#include "optomech/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "optomech/fresnel.hpp"

namespace optomech {

void S21Sweep::validate() const {
  if (frequencies.empty()) fail(ErrorKind::Data, "S21 sweep is empty");
  if (frequencies.size() != s21_power.size()) {
    fail(ErrorKind::Data, "S21 sweep: frequency and power columns differ in length");
  }
  if (!segment_scale.empty() && segment_scale.size() != frequencies.size()) {
    fail(ErrorKind::Data, "S21 sweep: segment_scale must match the sweep length");
  }
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
      fail(ErrorKind::Data, "S21 sweep: frequencies must be strictly increasing");
    }
    if (!(s21_power[i] >= 0.0) || !std::isfinite(s21_power[i])) {
      fail(ErrorKind::Data, "S21 sweep: power must be finite and >= 0");
    }
  }
  if (!(v_max > 0.0)) fail(ErrorKind::Data, "S21 sweep: V_max must be > 0");
  if (!(v_ref >= 0.0) || v_ref > v_max) fail(ErrorKind::Data, "S21 sweep: need 0 <= V_ref <= V_max");
}

namespace {

std::size_t reference_index(const S21Sweep& sweep) {
  const auto& f = sweep.frequencies;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i] - sweep.reference_freq) <= 1e-9 * std::max(1.0, sweep.reference_freq)) return i;
  }
  fail(ErrorKind::Data, "S21 sweep: reference frequency is not a sweep point");
}

}  // namespace

DisplacementSpectrum pzt_displacement(const S21Sweep& sweep, double wavelength) {
  sweep.validate();
  if (!(wavelength > 0.0)) fail(ErrorKind::InvalidArgument, "wavelength must be > 0");
  const std::size_t ref = reference_index(sweep);
  const double s_ref = sweep.s21_power[ref];
  if (!(s_ref > 0.0)) fail(ErrorKind::Data, "S21 at the reference frequency is zero");

  const double quarter = 0.25 * wavelength;
  const std::size_t n = sweep.frequencies.size();
  std::vector<double> d(n);
  std::vector<bool> saturated(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = quarter * (sweep.v_ref / sweep.v_max) * std::sqrt(sweep.s21_power[i] / s_ref);
    saturated[i] = raw >= quarter * (1.0 - 1e-9);
    d[i] = raw * (sweep.segment_scale.empty() ? 1.0 : sweep.segment_scale[i]);
  }
  return DisplacementSpectrum{
      SpectrumSeries(sweep.frequencies, std::move(d), "m", SpectrumConvention::PointValues),
      std::move(saturated)};
}

double pzt_pressure(double displacement, double frequency, const GasEnvironment& gas) {
  if (!(displacement >= 0.0) || !(frequency >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "PZT pressure needs displacement and frequency >= 0");
  }
  return kPi * frequency * displacement * gas.acoustic_impedance;
}

void PropagationPath::validate() const {
  if (!(distance >= 0.0)) fail(ErrorKind::InvalidArgument, "path distance must be >= 0");
  if (!(aperture_side > 0.0)) fail(ErrorKind::InvalidArgument, "aperture size must be > 0");
  if (absorption_override) {
    const auto& t = *absorption_override;
    if (t.frequencies.size() != t.db_per_m.size() || t.frequencies.size() < 2) {
      fail(ErrorKind::Data, "tabulated absorption needs >= 2 matching (f, dB/m) rows");
    }
  }
}

double diffraction_factor(const PropagationPath& path, double frequency, const GasEnvironment& gas) {
  path.validate();
  if (!(frequency > 0.0)) fail(ErrorKind::InvalidArgument, "diffraction factor needs frequency > 0");
  if (!(path.distance > 0.0)) fail(ErrorKind::InvalidArgument, "diffraction factor needs L > 0");
  const double lambda = gas.sound_speed / frequency;
  const double half = 0.5 * path.aperture_side;
  if (path.shape == ApertureShape::Circular) {
    return 2.0 * std::abs(std::sin(kPi * half * half / (2.0 * lambda * path.distance)));
  }
  const double u = half * std::sqrt(2.0 / (lambda * path.distance));
  const FresnelPair f = fresnel_integrals(u);
  return 2.0 * (f.c * f.c + f.s * f.s);
}

double atmospheric_attenuation(const PropagationPath& path, double frequency) {
  path.validate();
  if (!(frequency >= 0.0)) fail(ErrorKind::InvalidArgument, "frequency must be >= 0");
  double db_per_m = 0.0;
  if (path.absorption_override) {
    const auto& t = *path.absorption_override;
    if (frequency < t.frequencies.front() || frequency > t.frequencies.back()) {
      fail(ErrorKind::OutOfRange, "frequency outside the tabulated absorption curve");
    }
    const SpectrumSeries curve(t.frequencies, t.db_per_m, "dB/m", SpectrumConvention::PointValues);
    const double q[] = {frequency};
    db_per_m = interpolate(curve, q).front();
  } else {
    db_per_m = air_absorption_db_per_m(frequency, path.air);
  }
  return std::pow(10.0, db_per_m * path.distance / 20.0);
}

double pressure_at_sensor(double pzt_pressure, double diffraction, double attenuation) {
  if (!(attenuation >= 1.0)) fail(ErrorKind::InvalidArgument, "attenuation factor must be >= 1");
  return diffraction * pzt_pressure / attenuation;
}

AppliedPressure applied_pressure(const S21Sweep& sweep, double wavelength,
                                 const PropagationPath& path, const GasEnvironment& gas) {
  auto disp = pzt_displacement(sweep, wavelength);
  const auto& f = disp.displacement.axis();
  const auto& d = disp.displacement.real();
  std::vector<double> p_pzt(f.size()), p_sensor(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    p_pzt[i] = pzt_pressure(d[i], f[i], gas);
    const double c = f[i] > 0.0 ? diffraction_factor(path, f[i], gas) : 0.0;
    p_sensor[i] = pressure_at_sensor(p_pzt[i], c, atmospheric_attenuation(path, f[i]));
  }
  return AppliedPressure{
      SpectrumSeries(f, std::move(p_pzt), "Pa", SpectrumConvention::PointValues),
      SpectrumSeries(f, std::move(p_sensor), "Pa", SpectrumConvention::PointValues),
      std::move(disp.saturated)};
}

Responsivity responsivity(const SpectrumSeries& measured, const SpectrumSeries& applied) {
  const auto& f = measured.axis();
  const auto& v = measured.real();
  const bool same_grid = applied.axis() == f;
  const std::vector<double> p = same_grid ? applied.real() : interpolate(applied, f);
  std::vector<double> out(f.size());
  std::vector<bool> valid(f.size());
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    valid[i] = p[i] != 0.0;
    any = any || valid[i];
    out[i] = valid[i] ? v[i] / p[i] : std::numeric_limits<double>::quiet_NaN();
  }
  if (!any) fail(ErrorKind::Data, "applied pressure is zero everywhere");
  return Responsivity{
      SpectrumSeries(f, std::move(out), measured.unit() + "/Pa", SpectrumConvention::PointValues),
      std::move(valid)};
}

}  // namespace optomech
