#include "optomech/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "optomech/csv.hpp"
#include "optomech/parallel.hpp"
#include "optomech/svg.hpp"

#ifndef OPTOMECH_VERSION
#define OPTOMECH_VERSION "0.0.0"
#endif

namespace optomech {

namespace {

void write(const OutputOptions& out, const std::string& name, const std::string& content) {
  csv::write_atomic(out.dir / name, content);
}

void write_plot(const OutputOptions& out, const std::string& name, const svg::Plot& plot) {
  if (out.svg) write(out, name, svg::render(plot));
}

Json finish(const OutputOptions& out, Json summary) {
  write(out, "summary.json", summary.dump(2) + "\n");
  return summary;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

Json mode_json(const NamedMode& m) {
  return Json{{"name", m.name},
              {"resonance_freq_hz", to_cyclic(m.mode.resonance_freq)},
              {"intrinsic_damping_hz", to_cyclic(m.mode.intrinsic_damping)},
              {"gas_damping_hz", to_cyclic(m.mode.gas_damping)},
              {"effective_mass_kg", m.mode.effective_mass},
              {"overlap", m.mode.overlap},
              {"participation_ratio", m.mode.participation_ratio}};
}

double shot_floor_displacement(const RunConfig& cfg) {
  const double n_eff = cfg.detection_efficiency * cfg.cavity.photon_number;
  const double coef = transduction_coefficient(cfg.cavity, cfg.kind, cfg.cavity.detuning);
  if (!(n_eff > 0.0) || coef == 0.0) return 0.0;
  return 1.0 / (n_eff * coef * coef);
}

NepInputs nep_inputs(const RunConfig& cfg, const MechanicalMode& mode, double omega) {
  NepInputs in;
  in.mode = mode;
  in.gas = cfg.gas;
  in.gas_length = cfg.gas_length;
  in.cavity = cfg.cavity;
  in.area = cfg.area();
  in.kind = cfg.kind;
  in.omega = omega;
  in.detuning = cfg.cavity.detuning;
  in.detection_efficiency = cfg.detection_efficiency;
  return in;
}

}  // namespace

const char* tool_version() { return OPTOMECH_VERSION; }

Json RunManifest::to_json() const {
  Json j{{"command", command},
         {"subcommand", subcommand},
         {"config", config_path},
         {"output_dir", output_dir},
         {"overrides", overrides},
         {"version", version},
         {"format", format}};
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  return j;
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.subcommand = j.value("subcommand", "");
    m.config_path = j.at("config").get<std::string>();
    m.output_dir = j.value("output_dir", "");
    m.overrides = j.value("overrides", std::vector<std::string>{});
    m.version = j.value("version", "");
    m.format = j.value("format", "csv");
    if (j.contains("seed") && !j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    fail(ErrorKind::Config, std::string("manifest: ") + e.what());
  }
  return m;
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Config, "cannot open manifest " + path.string());
  try {
    return from_json(Json::parse(f));
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Config, "manifest " + path.string() + ": " + e.what());
  }
}

void write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  csv::write_atomic(dir / "manifest.json", m.to_json().dump(2) + "\n");
}

Json cmd_detuning_sweep(const RunConfig& cfg, const OutputOptions& out) {
  const auto& nm = cfg.mode();
  const auto grid = linspace(cfg.sweep.detuning_min, cfg.sweep.detuning_max, cfg.sweep.points);
  const auto curve =
      detuning_response_curve(cfg.cavity, nm.mode, cfg.kind, cfg.sweep.drive_frequency, grid);
  std::vector<double> transmission(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) transmission[i] = cavity_transmission(cfg.cavity, grid[i]);

  write(out, "detuning_curve.csv", csv::format_curve(curve));
  write(out, "transmission.csv", csv::format_columns({"detuning_rad_s", "transmission"}, {grid, transmission}));

  const double d_star = optimal_detuning(cfg.cavity, cfg.kind);
  const double d_drive = optimal_detuning_at(cfg.cavity, nm.mode, cfg.kind, cfg.sweep.drive_frequency);
  const auto mag = curve.magnitude();
  const auto peak = std::max_element(mag.begin(), mag.end()) - mag.begin();

  svg::Plot plot;
  plot.title = std::string("|chi| vs detuning (") + to_string(cfg.kind) + ")";
  plot.x_label = "detuning (rad/s)";
  plot.y_label = "|chi|";
  plot.lines.push_back({"|chi|", grid, mag});
  plot.markers.push_back({"+opt", d_star});
  plot.markers.push_back({"-opt", -d_star});
  write_plot(out, "detuning_curve.svg", plot);

  return finish(out, Json{{"command", "detuning-sweep"},
                          {"coupling", to_string(cfg.kind)},
                          {"mode", mode_json(nm)},
                          {"drive_frequency_rad_s", cfg.sweep.drive_frequency},
                          {"kappa_rad_s", cfg.cavity.total_decay()},
                          {"optimal_detuning_rad_s", d_star},
                          {"optimal_detuning_at_drive_rad_s", d_drive},
                          {"grid_peak_detuning_rad_s", grid[static_cast<std::size_t>(peak)]},
                          {"grid_peak_magnitude", mag[static_cast<std::size_t>(peak)]},
                          {"magnitude_at_zero_detuning",
                           std::abs(om_susceptibility(cfg.cavity, nm.mode, cfg.kind,
                                                      cfg.sweep.drive_frequency, 0.0))}});
}

std::vector<double> noise_grid(const NoiseSettings& s) {
  if (!s.log_spacing) return linspace(s.f_min, s.f_max, s.points);
  auto v = linspace(std::log10(s.f_min), std::log10(s.f_max), s.points);
  for (double& x : v) x = std::pow(10.0, x);
  v.front() = s.f_min;
  v.back() = s.f_max;
  return v;
}

Json cmd_noise_budget(const RunConfig& cfg, const OutputOptions& out) {
  if (cfg.modes.empty()) fail(ErrorKind::Config, "noise budget needs at least one mode");
  const auto f = noise_grid(cfg.noise);
  std::vector<ModeNoiseTerm> terms;
  for (const auto& m : cfg.modes) terms.push_back({m.mode, cfg.kind, 1.0, m.name});
  const double shot = shot_floor_displacement(cfg);
  const auto spec = synthesize_noise_spectrum(terms, shot, cfg.noise.one_over_f, f, cfg.gas, "m^2/Hz");

  write(out, "spectrum.csv", csv::format_spectrum(spec.total));
  std::vector<std::string> header{"freq_hz"};
  std::vector<std::vector<double>> cols{f};
  for (const auto& c : spec.components) {
    header.push_back(c.name);
    cols.push_back(c.values);
  }
  write(out, "components.csv", csv::format_columns(header, cols));

  const auto& nm = cfg.mode();
  std::vector<double> nep_v(f.size()), intr(f.size()), gas(f.size()), shot_v(f.size());
  parallel_for(f.size(), [&](std::size_t i) {
    const auto b = nep_breakdown(nep_inputs(cfg, nm.mode, to_angular(f[i])));
    nep_v[i] = b.nep;
    intr[i] = b.intrinsic;
    gas[i] = b.gas;
    shot_v[i] = b.shot;
  });
  write(out, "nep.csv", csv::format_columns({"freq_hz", "nep_pa_rthz", "intrinsic_pa2_hz", "gas_pa2_hz", "shot_pa2_hz"},
                                            {f, nep_v, intr, gas, shot_v}));

  const double omega = cfg.noise.drive_frequency > 0.0 ? cfg.noise.drive_frequency : nm.mode.resonance_freq;
  const auto at = nep_breakdown(nep_inputs(cfg, nm.mode, omega));
  const ModeNoiseTerm main_term{nm.mode, cfg.kind, 1.0, nm.name};
  Json band = nullptr;
  Json margin = nullptr;
  if (shot > 0.0) {
    const Band b = resonant_bandwidth(main_term, cfg.gas, shot);
    band = Json{{"f_lo_hz", b.f_lo}, {"f_hi_hz", b.f_hi}, {"width_hz", b.width()}};
    margin = power_ratio_to_db(thermomechanical_peak(main_term, cfg.gas) / shot);
  }

  if (out.svg) {
    svg::Plot p;
    p.title = "Noise budget";
    p.x_label = "frequency (Hz)";
    p.y_label = "PSD (m^2/Hz)";
    p.log_x = p.log_y = true;
    p.lines.push_back({"total", f, spec.total.real()});
    for (const auto& c : spec.components) p.lines.push_back({c.name, f, c.values});
    write_plot(out, "spectrum.svg", p);
    svg::Plot q;
    q.title = "Noise-equivalent pressure";
    q.x_label = "frequency (Hz)";
    q.y_label = "NEP (Pa/sqrt(Hz))";
    q.log_x = q.log_y = true;
    q.lines.push_back({"NEP", f, nep_v});
    write_plot(out, "nep.svg", q);
  }

  return finish(out, Json{{"command", "noise-budget"},
                          {"coupling", to_string(cfg.kind)},
                          {"mode", mode_json(nm)},
                          {"sensing_area_m2", cfg.area()},
                          {"report_frequency_hz", to_cyclic(omega)},
                          {"nep_pa_rthz", at.nep},
                          {"intrinsic_pa2_hz", at.intrinsic},
                          {"gas_pa2_hz", at.gas},
                          {"shot_pa2_hz", at.shot},
                          {"dominant", to_string(at.dominant)},
                          {"shot_floor_m2_hz", shot},
                          {"shot_margin_db", margin},
                          {"resonant_band", band}});
}

Json cmd_calibrate(const RunConfig& cfg, const OutputOptions& out) {
  const auto& c = cfg.calibration;
  if (c.s21_csv.empty()) fail(ErrorKind::Config, "calibration.s21_csv is not set");
  const auto na = csv::read_network_analyzer(c.s21_csv);
  S21Sweep sweep{na.frequencies, na.s21_power, c.reference_freq, c.v_ref, c.v_max, c.drive_voltage,
                 na.segment_scale};
  const auto applied = applied_pressure(sweep, c.wavelength, c.path, cfg.gas);
  const auto& f = applied.pzt.axis();
  std::vector<double> sat(f.size());
  std::size_t n_sat = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sat[i] = applied.saturated[i] ? 1.0 : 0.0;
    n_sat += applied.saturated[i];
  }
  const auto disp = pzt_displacement(sweep, c.wavelength);
  write(out, "displacement.csv",
        csv::format_columns({"freq_hz", "displacement_m", "saturated"}, {f, disp.displacement.real(), sat}));
  write(out, "applied_pressure.csv",
        csv::format_columns({"freq_hz", "p_pzt_pa", "p_sensor_pa", "saturated"},
                            {f, applied.pzt.real(), applied.sensor.real(), sat}));

  Json summary{{"command", "calibrate"},
               {"s21_csv", c.s21_csv.string()},
               {"points", f.size()},
               {"saturated_points", n_sat},
               {"max_p_sensor_pa", *std::max_element(applied.sensor.real().begin(), applied.sensor.real().end())},
               {"path_distance_m", c.path.distance},
               {"aperture_m", c.path.aperture_side},
               {"aperture_shape", c.path.shape == ApertureShape::Square ? "square" : "circular"}};

  svg::Plot p;
  p.title = "Applied pressure";
  p.x_label = "frequency (Hz)";
  p.y_label = "pressure (Pa)";
  p.log_x = p.log_y = true;
  p.lines.push_back({"P_PZT", f, applied.pzt.real()});
  p.lines.push_back({"P_sensor", f, applied.sensor.real()});
  write_plot(out, "applied_pressure.svg", p);

  if (!c.measured_csv.empty()) {
    const auto sa = csv::read_spectrum_analyzer(c.measured_csv);
    std::vector<double> volts(sa.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
      volts[i] = std::sqrt(sa.real()[i] * c.resolution_bandwidth * c.load_resistance);
    }
    const SpectrumSeries measured(sa.axis(), volts, "V", SpectrumConvention::PointValues);
    const auto r = responsivity(measured, applied.sensor);
    std::vector<double> valid(r.valid.size());
    for (std::size_t i = 0; i < valid.size(); ++i) valid[i] = r.valid[i] ? 1.0 : 0.0;
    write(out, "responsivity.csv", csv::format_columns({"freq_hz", "responsivity_v_per_pa", "valid"},
                                                        {r.values.axis(), r.values.real(), valid}));
    summary["measured_csv"] = c.measured_csv.string();
    summary["responsivity_points"] = r.values.size();
  }
  return finish(out, summary);
}

Json cmd_applications(const RunConfig& cfg, const std::string& sub, const OutputOptions& out) {
  Json r{{"command", "applications"}, {"subcommand", sub}};
  if (sub == "trace-gas") {
    const auto& t = cfg.trace_gas;
    const auto lim = min_concentration(cfg.gas, t.line, t.pulse, t.min_pressure, t.distance, t.mode_frequency);
    // Forward check: the limiting concentration reproduces P_eff,min.
    const double alpha = line_absorption(t.line, spectro::per_cm3_to_per_m3(lim.number_density));
    const auto sig = photoacoustic_pressure(cfg.gas, t.pulse, alpha, t.distance);
    r["inputs"] = Json{{"pulse_energy_j", t.pulse.energy},
                       {"pulse_duration_s", t.pulse.duration},
                       {"beam_radius_m", t.pulse.beam_radius},
                       {"line_intensity_cm_per_molec", t.line.line_intensity},
                       {"linewidth_per_cm", t.line.linewidth},
                       {"distance_m", t.distance},
                       {"min_effective_pressure_pa", t.min_pressure},
                       {"mode_frequency_hz", to_cyclic(t.mode_frequency)},
                       {"heat_capacity", cfg.gas.heat_capacity},
                       {"expansion_coeff", cfg.gas.expansion_coeff},
                       {"sound_speed", cfg.gas.sound_speed},
                       {"temperature_k", cfg.gas.temperature},
                       {"static_pressure_pa", cfg.gas.static_pressure}};
    r["short_pulse_valid"] = t.pulse.short_pulse(cfg.gas);
    r["c_min_per_cm3"] = lim.number_density;
    r["c_min_ppb"] = lim.ppb;
    r["absorption_at_c_min_per_m"] = alpha;
    r["peak_pressure_at_c_min_pa"] = sig.peak_pressure;
    r["effective_pressure_at_c_min_pa"] = effective_pressure(sig.peak_pressure, t.pulse.duration, t.mode_frequency);
    r["warnings"] = sig.warnings;
  } else if (sub == "cell-vib") {
    const auto& v = cfg.cell_vibration;
    const double p = cell_vibration_pressure(v.frequency, v.displacement, cfg.gas);
    r["inputs"] = Json{{"frequency_hz", v.frequency},
                       {"displacement_m", v.displacement},
                       {"acoustic_impedance", cfg.gas.acoustic_impedance},
                       {"nep_pa_rthz", v.nep},
                       {"bandwidth_hz", v.bandwidth}};
    r["pressure_pa"] = p;
    if (v.nep > 0.0) {
      const double d_min = detectable_displacement(v.nep, v.frequency, cfg.gas, v.bandwidth);
      r["detectable_displacement_m"] = d_min;
      r["detectable"] = v.displacement >= d_min;
    }
  } else if (sub == "cooling") {
    const auto& k = cfg.cooling;
    if (!(k.mode_frequency > 0.0) || !(k.quality_factor > 0.0)) {
      fail(ErrorKind::Config, "cooling needs mode_frequency and quality_factor > 0");
    }
    const double gamma = k.mode_frequency / k.quality_factor;
    const double c = k.cooperativity ? *k.cooperativity : cooperativity(cfg.cavity, gamma);
    const double g_eff = cooled_linewidth(gamma, c);
    r["inputs"] = Json{{"mode_frequency_hz", to_cyclic(k.mode_frequency)},
                       {"quality_factor", k.quality_factor},
                       {"cooperativity_source", k.cooperativity ? "config" : "cavity"}};
    r["cooperativity"] = c;
    r["linewidth_hz"] = to_cyclic(gamma);
    r["cooled_linewidth_hz"] = to_cyclic(g_eff);
    r["peak_reduction_factor"] = gamma / g_eff;
    r["model"] = "upper bound gamma (1 + C)";
  } else if (sub == "ldr") {
    const auto& l = cfg.ldr;
    r["inputs"] = Json{{"nep_pa_rthz", l.nep}, {"max_pressure_pa", l.max_pressure}, {"integration_time_s", l.integration_time}};
    r["ldr_db"] = ldr(l.nep, l.max_pressure, l.integration_time);
    if (l.applied_pressure > 0.0 && l.snr_integration_time > 0.0) {
      r["nep_from_snr_pa_rthz"] = nep_from_snr(l.applied_pressure, db_to_power_ratio(l.snr_db), l.snr_integration_time);
      r["snr_inputs"] = Json{{"applied_pressure_pa", l.applied_pressure},
                             {"snr_db", l.snr_db},
                             {"integration_time_s", l.snr_integration_time}};
    }
  } else if (sub == "force-sens") {
    const auto& s = cfg.force_sensitivity;
    r["inputs"] = Json{{"nep_pa_rthz", s.nep}, {"area_m2", s.area}};
    r["force_sensitivity_n_rthz"] = force_sensitivity(s.nep, s.area);
    if (s.rayleigh_length > 0.0 && s.acoustic_wavelength > 0.0) {
      r["rayleigh_inputs"] = Json{{"rayleigh_length_m", s.rayleigh_length}, {"acoustic_wavelength_m", s.acoustic_wavelength}};
      r["beam_radius_m"] = beam_radius_from_rayleigh(s.rayleigh_length, s.acoustic_wavelength);
    }
  } else {
    fail(ErrorKind::Config, "unknown applications subcommand '" + sub + "'");
  }
  return finish(out, r);
}

Json cmd_simulate(const RunConfig& cfg, const OutputOptions& out) {
  const auto& s = cfg.simulate;
  const auto& nm = cfg.mode(s.mode);
  auto trace = simulate_langevin(nm.mode, cfg.gas, cfg.area(), s.sim);
  if (s.detector) trace = transduce(trace, cfg.cavity, cfg.kind, cfg.cavity.detuning);
  const auto psd = psd_estimate(trace, s.psd_segments);
  const auto& f = psd.axis();
  const double s_f = langevin_force_psd(nm.mode, cfg.gas.temperature);
  std::vector<double> theory(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double chi = f[i] > 0.0 || nm.mode.total_damping() > 0.0
                           ? std::abs(mech_susceptibility(nm.mode, to_angular(f[i])))
                           : 0.0;
    theory[i] = s.sim.thermal ? s_f * chi * chi : 0.0;
  }
  write(out, "trace.csv", csv::format_trace(trace, s.trace_stride));
  write(out, "psd.csv", csv::format_spectrum(psd));
  write(out, "overlay.csv", csv::format_columns({"freq_hz", "psd_sim", "psd_theory"}, {f, psd.real(), theory}));

  const double fm = to_cyclic(nm.mode.resonance_freq);
  const double fwhm = to_cyclic(nm.mode.total_damping());
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i] - fm) <= 2.0 * fwhm && theory[i] > 0.0 && psd.real()[i] > 0.0) {
      const double d = 10.0 * std::log10(psd.real()[i] / theory[i]);
      sum += d * d;
      ++n;
    }
  }
  const double var = variance(trace.displacement);
  const double kt_k = kBoltzmann * cfg.gas.temperature / nm.mode.spring_constant();

  if (out.svg) {
    svg::Plot p;
    p.title = "Simulated displacement PSD";
    p.x_label = "frequency (Hz)";
    p.y_label = "PSD (m^2/Hz)";
    p.log_y = true;
    std::vector<double> fx, ys, yt;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (std::abs(f[i] - fm) <= 20.0 * fwhm) {
        fx.push_back(f[i]);
        ys.push_back(psd.real()[i]);
        yt.push_back(theory[i]);
      }
    }
    p.lines.push_back({"simulated", fx, ys});
    p.lines.push_back({"S_F |chi_m|^2", fx, yt});
    write_plot(out, "psd.svg", p);
  }

  Json r{{"command", "simulate"},
         {"mode", mode_json(nm)},
         {"seed", trace.seed},
         {"dt_s", s.sim.dt},
         {"duration_s", s.sim.duration},
         {"record_every", s.sim.record_every},
         {"samples", trace.displacement.size()},
         {"psd_segments", s.psd_segments},
         {"force_psd_n2_hz", s_f},
         {"variance_m2", var},
         {"equipartition_m2", kt_k},
         {"equipartition_ratio", var / kt_k},
         {"band_points", n},
         {"band_rms_db", n > 0 ? Json(std::sqrt(sum / static_cast<double>(n))) : Json(nullptr)},
         {"warnings", trace.warnings}};
  return finish(out, r);
}

}  // namespace optomech
