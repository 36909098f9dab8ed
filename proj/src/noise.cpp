#include "optomech/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optomech/parallel.hpp"

namespace optomech {

const char* to_string(NoiseTerm term) {
  switch (term) {
    case NoiseTerm::Gas: return "gas";
    case NoiseTerm::Intrinsic: return "intrinsic";
    case NoiseTerm::Shot: return "shot";
    case NoiseTerm::OneOverF: return "one-over-f";
  }
  return "unknown";
}

double thermal_force_psd(const MechanicalMode& mode, double gas_length, const GasEnvironment& gas) {
  if (!(gas.temperature > 0.0)) fail(ErrorKind::InvalidArgument, "temperature must be > 0");
  if (!(gas_length >= 0.0)) fail(ErrorKind::InvalidArgument, "viscous length must be >= 0");
  const double intrinsic = mode.effective_mass * to_cyclic(mode.intrinsic_damping);
  return 2.0 * (intrinsic + gas.viscosity * gas_length) * kBoltzmann * gas.temperature;
}

double thermal_force_psd(const MechanicalMode& mode, const GasEnvironment& gas) {
  if (!(gas.temperature > 0.0)) fail(ErrorKind::InvalidArgument, "temperature must be > 0");
  return 2.0 * mode.effective_mass * to_cyclic(mode.total_damping()) * kBoltzmann *
         gas.temperature;
}

NepBreakdown nep_breakdown(const NepInputs& in) {
  in.mode.validate();
  const double r = in.mode.participation_ratio;
  const double zeta = in.mode.overlap_magnitude();
  if (!(r > 0.0) || !(zeta > 0.0) || !(in.area > 0.0)) {
    fail(ErrorKind::InvalidArgument, "NEP needs participation ratio, overlap and area > 0");
  }
  if (!(in.detection_efficiency > 0.0 && in.detection_efficiency <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "detection efficiency must lie in (0, 1]");
  }
  const double kT = kBoltzmann * in.gas.temperature;
  const double m = in.mode.effective_mass;

  NepBreakdown b;
  const double scale = 1.0 / ((r * zeta * in.area) * (r * zeta * in.area));
  b.intrinsic = 2.0 * m * to_cyclic(in.mode.intrinsic_damping) * kT * scale;
  b.gas = (in.gas_length ? 2.0 * in.gas.viscosity * *in.gas_length * kT
                         : 2.0 * m * to_cyclic(in.mode.gas_damping) * kT) * scale;

  const double n_eff = in.detection_efficiency * in.cavity.photon_number;
  if (n_eff > 0.0) {
    const double chi = std::abs(om_susceptibility(in.cavity, in.mode, in.kind, in.omega, in.detuning));
    b.shot = chi > 0.0 ? scale / (n_eff * chi * chi) : std::numeric_limits<double>::infinity();
  }
  const double total = b.intrinsic + b.gas + b.shot;
  if (!(total > 0.0)) {
    fail(ErrorKind::Degenerate, "NEP is zero: no thermal noise and no shot term");
  }
  b.nep = std::sqrt(total);
  b.dominant = NoiseTerm::Gas;
  double top = b.gas;
  if (b.intrinsic > top) {
    top = b.intrinsic;
    b.dominant = NoiseTerm::Intrinsic;
  }
  if (b.shot > top) b.dominant = NoiseTerm::Shot;
  return b;
}

double nep(const NepInputs& in) { return nep_breakdown(in).nep; }

double nep_from_snr(double applied_pressure, double snr_power, double integration_time) {
  if (!(snr_power > 0.0) || !(integration_time > 0.0)) {
    fail(ErrorKind::InvalidArgument, "SNR and integration time must be > 0");
  }
  return std::sqrt(integration_time / snr_power) * applied_pressure;
}

double ldr(double nep, double max_pressure, double integration_time) {
  if (!(nep > 0.0) || !(max_pressure > 0.0) || !(integration_time > 0.0)) {
    fail(ErrorKind::InvalidArgument, "LDR inputs must be > 0");
  }
  return 20.0 * std::log10(max_pressure / (nep / std::sqrt(integration_time)));
}

double force_sensitivity(double nep, double area) {
  if (!(nep >= 0.0) || !(area >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "force sensitivity inputs must be >= 0");
  }
  return nep * area;
}

namespace {

double mode_psd(const ModeNoiseTerm& t, double force_psd, double f) {
  const double chi = std::abs(mech_susceptibility(t.mode, to_angular(f)));
  return t.gain * force_psd * chi * chi;
}

}  // namespace

NoiseSpectrum synthesize_noise_spectrum(std::span<const ModeNoiseTerm> modes, double shot_floor,
                                        const OneOverF& one_over_f, std::span<const double> f_grid,
                                        const GasEnvironment& gas, const std::string& unit) {
  if (f_grid.empty()) fail(ErrorKind::InvalidArgument, "frequency grid is empty");
  for (std::size_t i = 0; i < f_grid.size(); ++i) {
    if (!(f_grid[i] > 0.0) || (i > 0 && !(f_grid[i] > f_grid[i - 1]))) {
      fail(ErrorKind::InvalidArgument, "frequency grid must be positive and increasing");
    }
  }
  if (!(shot_floor >= 0.0)) fail(ErrorKind::InvalidArgument, "shot floor must be >= 0");
  const std::size_t n = f_grid.size();

  std::vector<NamedSeries> comps;
  comps.push_back({"shot", NoiseTerm::Shot, std::vector<double>(n, shot_floor)});
  if (one_over_f.amplitude_at_1hz > 0.0) {
    NamedSeries s{"one_over_f", NoiseTerm::OneOverF, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      s.values[i] = one_over_f.amplitude_at_1hz / std::pow(f_grid[i], one_over_f.exponent);
    }
    comps.push_back(std::move(s));
  }
  const double kT = kBoltzmann * gas.temperature;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto& t = modes[k];
    t.mode.validate();
    const std::string base = t.name.empty() ? "mode" + std::to_string(k) : t.name;
    const double s_int = 2.0 * t.mode.effective_mass * to_cyclic(t.mode.intrinsic_damping) * kT;
    const double s_gas = 2.0 * t.mode.effective_mass * to_cyclic(t.mode.gas_damping) * kT;
    NamedSeries intr{base + "_intrinsic", NoiseTerm::Intrinsic, std::vector<double>(n)};
    NamedSeries gasc{base + "_gas", NoiseTerm::Gas, std::vector<double>(n)};
    parallel_for(n, [&](std::size_t i) {
      intr.values[i] = mode_psd(t, s_int, f_grid[i]);
      gasc.values[i] = mode_psd(t, s_gas, f_grid[i]);
    });
    comps.push_back(std::move(intr));
    comps.push_back(std::move(gasc));
  }

  std::vector<double> total(n, 0.0);
  for (const auto& c : comps) {
    for (std::size_t i = 0; i < n; ++i) total[i] += c.values[i];
  }
  return NoiseSpectrum{
      SpectrumSeries(std::vector<double>(f_grid.begin(), f_grid.end()), std::move(total), unit),
      std::move(comps)};
}

double thermomechanical_peak(const ModeNoiseTerm& term, const GasEnvironment& gas) {
  term.mode.validate();
  const double wm = term.mode.resonance_freq;
  const double g = term.mode.total_damping();
  const double w2 = wm * wm - 0.5 * g * g;
  const double w_peak = w2 > 0.0 ? std::sqrt(w2) : 0.0;
  return mode_psd(term, thermal_force_psd(term.mode, gas), to_cyclic(w_peak));
}

double shot_floor_below(double peak, double margin_db) { return peak / db_to_power_ratio(margin_db); }

Band resonant_bandwidth(const ModeNoiseTerm& term, const GasEnvironment& gas, double shot_floor) {
  term.mode.validate();
  if (!(shot_floor > 0.0)) fail(ErrorKind::InvalidArgument, "shot floor must be > 0");
  const double m = term.mode.effective_mass;
  const double wm = term.mode.resonance_freq;
  const double g = term.mode.total_damping();
  // gain S_T / (m^2 ((wm^2 - w^2)^2 + g^2 w^2)) = shot, quadratic in y = w^2.
  const double K = term.gain * thermal_force_psd(term.mode, gas) / (m * m * shot_floor);
  const double p = 2.0 * wm * wm - g * g;
  const double disc = p * p - 4.0 * (std::pow(wm, 4) - K);
  if (disc <= 0.0) return {};
  const double root = std::sqrt(disc);
  const double y_hi = 0.5 * (p + root);
  const double y_lo = 0.5 * (p - root);
  if (y_hi <= 0.0) return {};
  return Band{to_cyclic(std::sqrt(std::max(0.0, y_lo))), to_cyclic(std::sqrt(y_hi))};
}

Band resonant_bandwidth(const SpectrumSeries& thermomechanical, const SpectrumSeries& shot) {
  const auto& f = thermomechanical.axis();
  const auto& t = thermomechanical.real();
  const auto s = interpolate(shot, f);
  if (f.empty()) return {};
  const auto peak = static_cast<std::size_t>(std::max_element(t.begin(), t.end()) - t.begin());
  if (!(t[peak] > s[peak])) return {};
  const auto diff = [&](std::size_t i) { return t[i] - s[i]; };
  const auto cross = [&](std::size_t a, std::size_t b) {
    return f[a] + (f[b] - f[a]) * diff(a) / (diff(a) - diff(b));
  };
  std::size_t lo = peak;
  while (lo > 0 && diff(lo - 1) > 0.0) --lo;
  std::size_t hi = peak;
  while (hi + 1 < f.size() && diff(hi + 1) > 0.0) ++hi;
  Band b;
  b.f_lo = lo > 0 ? cross(lo - 1, lo) : f.front();
  b.f_hi = hi + 1 < f.size() ? cross(hi, hi + 1) : f.back();
  return b;
}

}  // namespace optomech
