// Acceptance report: one PASS/FAIL line per criterion, property sub-lines under
// AC13. Exit status is 0 only when every failing line is on the documented
// known-unattainable list (see README, "Acceptance").

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/applications.hpp"
#include "optomech/calibration.hpp"
#include "optomech/commands.hpp"
#include "optomech/config.hpp"
#include "optomech/damping.hpp"
#include "optomech/error.hpp"
#include "optomech/noise.hpp"
#include "optomech/response.hpp"
#include "optomech/timedomain.hpp"

using namespace optomech;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kAc1Lo = 0.5e-6, kAc1Hi = 2.0e-6;        // Pa/sqrt(Hz)
constexpr double kAc2Target = 100e-6, kAc2Rel = 0.15;
constexpr double kAc3Target = 84e-6, kAc3Abs = 1e-6;
constexpr double kAc4LLo = 0.35e-3, kAc4LHi = 0.45e-3;    // m
constexpr double kAc4GLo = 55.0, kAc4GHi = 70.0;          // Hz
constexpr double kAc5Rel = 1e-12;
constexpr double kAc6Rel = 1e-6;
constexpr double kAc7Rel = 1e-2;
constexpr int kAc7Draws = 100;
constexpr double kAc8VarRel = 0.05;
constexpr double kAc8RmsDb = 0.5;
constexpr double kAc9Target = 12.5, kAc9Rel = 0.20;       // ppb
constexpr double kAc10Target = 1.30e-2, kAc10Rel = 0.01;  // Pa
constexpr double kAc11Min = 120.0;                        // dB
constexpr double kAc12Target = 1.8e-9, kAc12Rel = 0.01;   // N/sqrt(Hz)
constexpr double kAc12WLo = 0.9e-3, kAc12WHi = 1.1e-3;    // m
constexpr double kGLimitTol = 1e-3;
constexpr double kExact = 1e-12;

// Lines that cannot pass as worded; the analysis is in the README.
const std::set<std::string> kKnownUnattainable = {"AC13.04b", "AC13.06"};

struct Report {
  int failed = 0;
  int failed_known = 0;

  void line(const std::string& id, bool pass, const std::string& text) {
    const bool known = kKnownUnattainable.count(id) > 0;
    if (!pass) {
      ++failed;
      if (known) ++failed_known;
    }
    std::printf("%-9s %s  %s%s\n", id.c_str(), pass ? "PASS" : "FAIL", text.c_str(),
                !pass && known ? "  [known-unattainable]" : "");
    std::fflush(stdout);
  }

  void guarded(const std::string& id, const std::string& what, const std::function<std::string(bool&)>& body) {
    bool pass = false;
    std::string text;
    try {
      text = body(pass);
    } catch (const std::exception& e) {
      pass = false;
      text = what + ": exception: " + e.what();
    }
    line(id, pass, text);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool rel_ok(double got, double want, double tol) { return std::abs(got - want) <= tol * std::abs(want); }

SensorGeometry microdisk_geometry() { return {148e-6, 82e-6, 1.8e-6, 2650.0, 7.17e-6, 1.0}; }

MechanicalMode microdisk_mode(double f_hz) {
  return {to_angular(f_hz), to_angular(150.0), to_angular(1280.0), 110e-12, 0.14, 0.055};
}

OpticalCavity microdisk_cavity() {
  OpticalCavity c;
  c.intrinsic_loss = to_angular(56e6);
  c.input_coupling = to_angular(56e6);
  c.dispersive_coupling = to_angular(1.05e18);
  c.photon_number = 1e8;
  return c;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < 300; ++i) {
    const double a = hi - r * (hi - lo);
    const double b = lo + r * (hi - lo);
    if (f(a) < f(b)) lo = a; else hi = b;
  }
  return 0.5 * (lo + hi);
}

double log_uniform(std::mt19937_64& g, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(g));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct SimResult {
  double variance_ratio = 0.0;
  double rms_db = 0.0;
  double fit_linewidth_ratio = 0.0;
  double fdt_fraction = 0.0;
  double fdt_bound = 0.0;
  bool deterministic = false;
};

SimResult run_langevin_oracle() {
  MechanicalMode m = microdisk_mode(315e3);
  const GasEnvironment gas;
  SimulationConfig cfg;
  cfg.dt = 1.5e-7;
  cfg.duration = 4.0;
  cfg.seed = 20240601;
  cfg.record_every = 4;
  const std::size_t segments = 80;
  const auto tr = simulate_langevin(m, gas, 5e-8, cfg);

  SimResult r;
  r.variance_ratio = variance(tr.displacement) / (kBoltzmann * gas.temperature / m.spring_constant());
  const auto psd = psd_estimate(tr, segments);
  const double s_f = langevin_force_psd(m, gas.temperature);
  const double f0 = to_cyclic(m.resonance_freq);
  const double fwhm = to_cyclic(m.total_damping());
  double acc = 0.0;
  std::size_t n = 0, inside = 0;
  // one-sigma relative scatter of a Welch bin, taking only the non-overlapped segments
  r.fdt_bound = 3.0 / std::sqrt(static_cast<double>(segments));
  for (std::size_t k = 0; k < psd.size(); ++k) {
    const double f = psd.axis()[k];
    if (f < f0 - 2.0 * fwhm || f > f0 + 2.0 * fwhm) continue;
    const double theory = s_f * std::norm(mech_susceptibility(m, to_angular(f)));
    const double ratio = psd.real()[k] / theory;
    const double db = 10.0 * std::log10(ratio);
    acc += db * db;
    ++n;
    if (std::abs(ratio - 1.0) <= r.fdt_bound) ++inside;
  }
  r.rms_db = std::sqrt(acc / static_cast<double>(n));
  r.fdt_fraction = static_cast<double>(inside) / static_cast<double>(n);
  const auto fit = fit_lorentzian(psd, f0 - 2.0 * fwhm, f0 + 2.0 * fwhm);
  r.fit_linewidth_ratio = fit.linewidth / m.total_damping();

  SimulationConfig small = cfg;
  small.duration = 5e-3;
  r.deterministic = simulate_langevin(m, gas, 5e-8, small).displacement ==
                    simulate_langevin(m, gas, 5e-8, small).displacement;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path source_dir = argc > 1 ? fs::path(argv[1]) : fs::path(OPTOMECH_SOURCE_DIR);
  const fs::path work_dir = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "optomech_acceptance";
  Report rep;
  const GasEnvironment air;

  rep.guarded("AC1", "gas-damping thermal limit", [&](bool& pass) {
    NepInputs in;
    in.mode = microdisk_mode(318e3);
    in.mode.intrinsic_damping = 0.0;
    in.mode.overlap = 1.0;
    in.mode.participation_ratio = 1.0;
    in.gas_length = 8e-3;
    in.area = 5e-8;
    in.omega = in.mode.resonance_freq;
    const double p = nep(in);
    pass = p >= kAc1Lo && p <= kAc1Hi;
    return fmt("gas-damping thermal limit: nep = %.4g uPa/rtHz, want [0.5, 2.0]", p * 1e6);
  });

  rep.guarded("AC2", "318 kHz NEP", [&](bool& pass) {
    NepInputs in;
    in.mode = microdisk_mode(318e3);
    in.area = 5e-8;
    in.omega = in.mode.resonance_freq;
    const double p = nep(in);
    pass = rel_ok(p, kAc2Target, kAc2Rel);
    return fmt("318 kHz resonance NEP: %.4g uPa/rtHz, want 100 +/- 15%%", p * 1e6);
  });

  rep.guarded("AC3", "SNR endpoint", [&](bool& pass) {
    const double p = nep_from_snr(0.120, db_to_power_ratio(40.0), 1.0 / 200.0);
    pass = std::abs(p - kAc3Target) <= kAc3Abs;
    return fmt("SNR-derived NEP: %.4g uPa/rtHz, want 84 +/- 1", p * 1e6);
  });

  rep.guarded("AC4", "drag model", [&](bool& pass) {
    const auto g = microdisk_geometry();
    MechanicalMode m = microdisk_mode(318e3);
    m.effective_mass = 0.5 * derive_geometry(g).total_mass;
    const double l = drag_length(g, m, 0.85);
    const double gam = to_cyclic(gas_damping_rate(l, air, m));
    pass = l >= kAc4LLo && l <= kAc4LHi && gam >= kAc4GLo && gam <= kAc4GHi;
    return fmt("drag model: l_drag = %.4g mm in [0.35, 0.45], gamma_drag/2pi = %.4g Hz in [55, 70]",
               l * 1e3, gam);
  });

  rep.guarded("AC5", "damping decomposition", [&](bool& pass) {
    const std::vector<PressurePoint> sweep{{mbar_to_pa(1000.0), to_angular(1430.0)},
                                           {mbar_to_pa(44.0), to_angular(535.0)},
                                           {mbar_to_pa(0.056), to_angular(150.0)}};
    const auto d = decompose_damping(sweep);
    const double gi = to_cyclic(d.gamma_intrinsic), gg = to_cyclic(d.gamma_gas);
    pass = rel_ok(gi, 150.0, kAc5Rel) && rel_ok(gg, 1280.0, kAc5Rel);
    return fmt("damping decomposition: intrinsic %.15g Hz (150), gas %.15g Hz (1280)", gi, gg);
  });

  rep.guarded("AC6", "optimal detuning", [&](bool& pass) {
    std::mt19937_64 g(6);
    double worst = 0.0;
    bool zero_disp = true, diss_iff = true;
    for (int i = 0; i < 50; ++i) {
      OpticalCavity c = microdisk_cavity();
      c.input_coupling = log_uniform(g, 1e6, 1e10);
      c.intrinsic_loss = log_uniform(g, 1e6, 1e10);
      c.dissipative_coupling = 1e6;
      const double k0 = c.total_decay();
      const double found = golden_max(
          [&](double d) { return std::abs(transduction_coefficient(c, CouplingKind::Dispersive, d)); },
          0.0, 2.0 * k0);
      worst = std::max(worst, std::abs(found / (k0 / (2.0 * std::sqrt(3.0))) - 1.0));
      zero_disp = zero_disp && transduction_coefficient(c, CouplingKind::Dispersive, 0.0) == 0.0;
      diss_iff = diss_iff && transduction_coefficient(c, CouplingKind::Dissipative, 0.0) != 0.0;
      OpticalCavity crit = c;
      crit.input_coupling = crit.intrinsic_loss;
      diss_iff = diss_iff && transduction_coefficient(crit, CouplingKind::Dissipative, 0.0) == 0.0;
    }
    pass = worst <= kAc6Rel && zero_disp && diss_iff;
    return fmt("optimal detuning: max |argmax / (kappa_0 / 2 sqrt 3) - 1| = %.2g (<= 1e-6); "
               "dispersive zero at 0: %s; dissipative zero iff critical: %s",
               worst, zero_disp ? "yes" : "no", diss_iff ? "yes" : "no");
  });

  rep.guarded("AC7", "full vs low-frequency", [&](bool& pass) {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    double worst = 0.0;
    for (int i = 0; i < kAc7Draws; ++i) {
      OpticalCavity c = microdisk_cavity();
      c.input_coupling = log_uniform(g, 1e7, 1e10);
      c.intrinsic_loss = log_uniform(g, 1e7, 1e10);
      c.dissipative_coupling = log_uniform(g, 1e3, 1e9);
      const auto kind = i % 2 ? CouplingKind::Dissipative : CouplingKind::Dispersive;
      MechanicalMode m = microdisk_mode(log_uniform(g, 1e4, 1e6));
      const double k0 = c.total_decay();
      const double d = u(g) * k0;
      const double w = 1e-3 * k0;
      const auto full = om_susceptibility(c, m, kind, w, d);
      const auto low = om_susceptibility_lowfreq(c, m, kind, w, d);
      worst = std::max(worst, std::abs(full - low) / std::abs(low));
    }
    pass = worst < kAc7Rel;
    return fmt("full vs low-frequency susceptibility: worst deviation %.3g over %d draws (< 1e-2)", worst,
               kAc7Draws);
  });

  SimResult sim;
  bool sim_ok = false;
  rep.guarded("AC8", "Langevin oracle", [&](bool& pass) {
    sim = run_langevin_oracle();
    sim_ok = true;
    pass = std::abs(sim.variance_ratio - 1.0) <= kAc8VarRel && sim.rms_db <= kAc8RmsDb;
    return fmt("Langevin oracle (315 kHz, 4 s, seed 20240601): <x^2> / (kT/k) = %.4f (+/- 5%%), "
               "PSD vs S_F |chi_m|^2 RMS = %.3f dB over f_m +/- 2 FWHM (<= 0.5)",
               sim.variance_ratio, sim.rms_db);
  });

  rep.guarded("AC9", "trace gas", [&](bool& pass) {
    const LaserPulse pulse{1e-6, 1e-6, 50e-6};
    const GasLine line{4.7e-19, 0.06, 1.65e-6};
    const auto c = min_concentration(air, line, pulse, 84e-6, 100e-6, to_angular(318e3));
    pass = rel_ok(c.ppb, kAc9Target, kAc9Rel);
    return fmt("trace gas: c_min = %.4g ppb (%.4g cm^-3), want 12.5 +/- 20%%", c.ppb, c.number_density);
  });

  rep.guarded("AC10", "cell vibration", [&](bool& pass) {
    const double p = cell_vibration_pressure(10e3, 1e-9, air);
    pass = rel_ok(p, kAc10Target, kAc10Rel);
    return fmt("cell vibration: %.5g Pa, want 1.30e-2 +/- 1%%", p);
  });

  rep.guarded("AC11", "LDR", [&](bool& pass) {
    const double v = ldr(84e-6, 100.0, 1.0);
    pass = v >= kAc11Min;
    return fmt("linear dynamic range: %.4g dB (>= 120)", v);
  });

  rep.guarded("AC12", "force sensitivity", [&](bool& pass) {
    const double f = force_sensitivity(0.45e-3, 4e-6);
    const double w = beam_radius_from_rayleigh(2e-3, 1.5e-3);
    pass = rel_ok(f, kAc12Target, kAc12Rel) && w >= kAc12WLo && w <= kAc12WHi;
    return fmt("force sensitivity: %.4g nN/rtHz (1.8 +/- 1%%); Rayleigh w = %.4g mm in [0.9, 1.1]",
               f * 1e9, w * 1e3);
  });

  // AC13: property suite
  const int failed_before = rep.failed;
  std::mt19937_64 g(13);

  rep.guarded("AC13.01", "geometry scale covariance", [&](bool& pass) {
    const auto base = derive_geometry(microdisk_geometry());
    pass = true;
    for (int i = 0; i < 50; ++i) {
      const double s = log_uniform(g, 1e-2, 1e2);
      SensorGeometry x = microdisk_geometry();
      x.major_radius *= s;
      x.minor_radius *= s;
      x.thickness *= s;
      x.substrate_gap *= s;
      const auto d = derive_geometry(x);
      pass = pass && rel_ok(d.area, base.area * s * s, kExact) && rel_ok(d.total_mass, base.total_mass * s * s * s, kExact);
    }
    return std::string("derive_geometry: area ~ s^2, mass ~ s^3 for 50 random s");
  });

  rep.guarded("AC13.02", "rate round trip", [&](bool& pass) {
    pass = true;
    for (int i = 0; i < 1000; ++i) {
      const double x = log_uniform(g, 1e-6, 1e12);
      pass = pass && rel_ok(to_cyclic(to_angular(x)), x, 1e-15) && rel_ok(to_angular(to_cyclic(x)), x, 1e-15);
    }
    return std::string("rate conversion round trip to machine precision");
  });

  rep.guarded("AC13.03", "squeeze h^-3", [&](bool& pass) {
    pass = true;
    for (int i = 0; i < 50; ++i) {
      const double h = log_uniform(g, 1e-7, 1e-4);
      const double b = std::uniform_real_distribution<double>(0.0, 0.99)(g);
      pass = pass && squeeze_length(148e-6, b, 2.0 * h) == squeeze_length(148e-6, b, h) / 8.0;
    }
    return std::string("l_squeeze(2h) == l_squeeze(h) / 8 exactly");
  });

  rep.guarded("AC13.04a", "G near 1", [&](bool& pass) {
    double prev = 1.0;
    bool mono = true;
    for (int i = 1; i < 10000; ++i) {
      const double v = squeeze_geometry_factor(i / 10000.0);
      mono = mono && v <= prev && std::isfinite(v);
      prev = v;
    }
    const double hi = squeeze_geometry_factor(1.0 - 1e-6);
    pass = mono && std::abs(hi) <= kGLimitTol;
    return fmt("G continuous and monotone on (0, 1); G(1 - 1e-6) = %.3g (within 1e-3 of 0)", hi);
  });

  rep.guarded("AC13.04b", "G near 0", [&](bool& pass) {
    const double lo = squeeze_geometry_factor(1e-6);
    pass = std::abs(lo - 1.0) <= kGLimitTol;
    return fmt("G(1e-6) = %.6f, want within 1e-3 of 1; the approach is 1 + 1/ln(beta), "
               "reaching 1e-3 only near beta = 1e-434",
               lo);
  });

  rep.guarded("AC13.05", "gas rate linearity", [&](bool& pass) {
    pass = true;
    const MechanicalMode m = microdisk_mode(318e3);
    const double base = gas_damping_rate(4e-4, air, m);
    for (int i = 0; i < 50; ++i) {
      const double a = log_uniform(g, 0.1, 10.0), b = log_uniform(g, 0.1, 10.0), c = log_uniform(g, 0.1, 10.0);
      GasEnvironment gas = air;
      gas.viscosity *= a;
      MechanicalMode mm = m;
      mm.effective_mass *= c;
      pass = pass && rel_ok(gas_damping_rate(4e-4 * b, gas, mm), base * a * b / c, kExact);
    }
    return std::string("gas_damping_rate linear in mu and l, inverse in m");
  });

  rep.guarded("AC13.06", "affine decomposition", [&](bool& pass) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double g0 = log_uniform(g, 1e2, 1e4), c = log_uniform(g, 1e-3, 1e-1), p_min = log_uniform(g, 1e-2, 10.0);
      std::vector<PressurePoint> sweep;
      for (double p = p_min; p <= 1.1e5; p *= 10.0) sweep.push_back({p, g0 + c * p});
      const auto d = decompose_damping(sweep);
      worst = std::max(worst, std::abs(d.gamma_intrinsic - g0) / g0);
    }
    pass = worst <= kExact;
    return fmt("decompose_damping on affine sweeps: worst intrinsic error %.3g (exact wanted); "
               "plateau-min returns gamma_0 + c p_min",
               worst);
  });

  rep.guarded("AC13.07", "even in detuning", [&](bool& pass) {
    pass = true;
    const MechanicalMode m = microdisk_mode(315e3);
    for (int i = 0; i < 200; ++i) {
      OpticalCavity c = microdisk_cavity();
      c.input_coupling = log_uniform(g, 1e6, 1e10);
      c.intrinsic_loss = log_uniform(g, 1e6, 1e10);
      c.dissipative_coupling = 1e6;
      const auto kind = i % 2 ? CouplingKind::Dissipative : CouplingKind::Dispersive;
      const double d = log_uniform(g, 1e3, 1e11), w = log_uniform(g, 1e3, 1e7);
      pass = pass && rel_ok(std::abs(om_susceptibility(c, m, kind, w, d)),
                            std::abs(om_susceptibility(c, m, kind, w, -d)), kExact);
    }
    return std::string("|chi(w, Delta)| even in Delta, both couplings");
  });

  rep.guarded("AC13.08", "zeros", [&](bool& pass) {
    pass = true;
    const MechanicalMode m = microdisk_mode(315e3);
    for (int i = 0; i < 100; ++i) {
      OpticalCavity c = microdisk_cavity();
      c.input_coupling = log_uniform(g, 1e6, 1e10);
      c.intrinsic_loss = log_uniform(g, 1e6, 1e10);
      c.dissipative_coupling = 1e6;
      const double w = log_uniform(g, 1e3, 1e7);
      pass = pass && om_susceptibility(c, m, CouplingKind::Dispersive, w, 0.0) == std::complex<double>(0.0, 0.0);
      pass = pass && std::abs(om_susceptibility(c, m, CouplingKind::Dissipative, w, 0.0)) > 0.0;
      c.input_coupling = c.intrinsic_loss;
      pass = pass && std::abs(transduction_coefficient(c, CouplingKind::Dissipative, 0.0)) == 0.0;
    }
    return std::string("dispersive chi(Delta=0) = 0; dissipative zero at 0 iff critical");
  });

  rep.guarded("AC13.09", "argmax invariance", [&](bool& pass) {
    pass = true;
    for (int i = 0; i < 30; ++i) {
      OpticalCavity c = microdisk_cavity();
      c.dispersive_coupling *= log_uniform(g, 1e-3, 1e3);
      c.photon_number *= log_uniform(g, 1e-3, 1e3);
      const double k0 = c.total_decay();
      const double found = golden_max(
          [&](double d) { return std::abs(transduction_coefficient(c, CouplingKind::Dispersive, d)); }, 0.0, 2.0 * k0);
      pass = pass && rel_ok(found, k0 / (2.0 * std::sqrt(3.0)), kAc6Rel);
    }
    return std::string("quasi-static argmax kappa_0 / (2 sqrt 3) independent of g_disp and N");
  });

  rep.guarded("AC13.10", "convergence", [&](bool& pass) {
    const MechanicalMode m = microdisk_mode(315e3);
    const OpticalCavity c = microdisk_cavity();
    const double k0 = c.total_decay(), d = 0.3 * k0;
    double prev = INFINITY;
    pass = true;
    for (double r : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
      const auto full = om_susceptibility(c, m, CouplingKind::Dispersive, r * k0, d);
      const auto low = om_susceptibility_lowfreq(c, m, CouplingKind::Dispersive, r * k0, d);
      const double dev = std::abs(full - low) / std::abs(low);
      pass = pass && dev < prev;
      if (r == 1e-3) pass = pass && dev < kAc7Rel;
      prev = dev;
    }
    return fmt("full -> low-frequency deviation decreases with w / kappa_0; %.2g at 1e-5", prev);
  });

  rep.guarded("AC13.11", "passivity", [&](bool& pass) {
    pass = true;
    const MechanicalMode m = microdisk_mode(315e3);
    for (int i = 0; i < 500; ++i) {
      const double w = log_uniform(g, 1.0, 1e9);
      const auto chi = mech_susceptibility(m, w);
      pass = pass && chi.imag() > 0.0 && rel_ok(std::abs(chi), std::abs(mech_susceptibility(m, -w)), kExact);
    }
    return std::string("Im chi_m(w) > 0 for w > 0 and |chi_m(w)| = |chi_m(-w)|");
  });

  NepInputs nep_base;
  nep_base.mode = microdisk_mode(318e3);
  nep_base.cavity = microdisk_cavity();
  nep_base.area = 5e-8;
  nep_base.omega = nep_base.mode.resonance_freq;
  nep_base.detuning = optimal_detuning(nep_base.cavity, CouplingKind::Dispersive);

  rep.guarded("AC13.12", "NEP scaling", [&](bool& pass) {
    pass = true;
    const double p0 = nep(nep_base);
    for (int i = 0; i < 50; ++i) {
      NepInputs in = nep_base;
      const double a = log_uniform(g, 0.1, 10.0), b = log_uniform(g, 0.1, 1.0 / 0.14), c = log_uniform(g, 0.1, 10.0);
      in.mode.participation_ratio *= a;
      in.mode.overlap *= b;
      in.area *= c;
      pass = pass && rel_ok(nep(in), p0 / (a * b * c), kExact);
    }
    return std::string("nep scales exactly as 1 / (r zeta A)");
  });

  rep.guarded("AC13.13", "NEP monotone", [&](bool& pass) {
    pass = true;
    NepInputs base = nep_base;
    base.gas_length = 4e-4;
    for (int i = 0; i < 50; ++i) {
      const double up = 1.0 + log_uniform(g, 1e-3, 10.0);
      const double p0 = nep(base);
      NepInputs a = base; a.cavity.photon_number *= up;
      NepInputs b = base; b.gas.temperature *= up;
      NepInputs c = base; c.gas.viscosity *= up;
      NepInputs d = base; *d.gas_length *= up;
      NepInputs e = base; e.mode.intrinsic_damping *= up;
      pass = pass && nep(a) <= p0 && nep(b) >= p0 && nep(c) >= p0 && nep(d) >= p0 && nep(e) >= p0;
    }
    return std::string("nep non-increasing in N, non-decreasing in T, mu, l, gamma");
  });

  rep.guarded("AC13.14", "N to infinity", [&](bool& pass) {
    NepInputs thermal = nep_base;
    thermal.cavity.photon_number = 0.0;
    const double t = nep(thermal);
    NepInputs in = nep_base;
    in.cavity.photon_number = 1e18;
    const double p = nep(in);
    pass = rel_ok(p, t, 1e-8);
    return fmt("on resonance, nep(N = 1e18) / thermal-only = %.12f", p / t);
  });

  rep.guarded("AC13.15", "additivity", [&](bool& pass) {
    std::vector<ModeNoiseTerm> terms{{microdisk_mode(315e3), CouplingKind::Dispersive, 1.0, "a"},
                                     {microdisk_mode(450e3), CouplingKind::Dispersive, 3.0, "b"}};
    std::vector<double> f;
    for (int i = 1; i <= 2000; ++i) f.push_back(500.0 * i);
    const auto s = synthesize_noise_spectrum(terms, 1e-31, OneOverF{1e-27, 1.0}, f, air, "m^2/Hz");
    pass = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
      double sum = 0.0;
      for (const auto& c : s.components) {
        sum += c.values[i];
        pass = pass && c.values[i] >= 0.0;
      }
      pass = pass && rel_ok(s.total.real()[i], sum, 1e-14);
    }
    return std::string("synthesized spectrum equals the sum of its components");
  });

  rep.guarded("AC13.16", "LDR +20 dB", [&](bool& pass) {
    pass = true;
    for (int i = 0; i < 50; ++i) {
      const double n = log_uniform(g, 1e-7, 1e-2), pm = log_uniform(g, 1e-2, 1e3), t = log_uniform(g, 1e-3, 1e2);
      pass = pass && std::abs(ldr(n, 10.0 * pm, t) - ldr(n, pm, t) - 20.0) < 1e-9;
    }
    return std::string("ldr(10 P_max) = ldr(P_max) + 20 dB");
  });

  rep.line("AC13.17", sim_ok && sim.deterministic, "simulate_langevin: identical seed gives a bit-identical trace");
  rep.line("AC13.18", sim_ok && std::abs(sim.variance_ratio - 1.0) <= kAc8VarRel,
           fmt("equipartition within 5%%: ratio %.4f", sim.variance_ratio));
  rep.line("AC13.19", sim_ok && std::abs(sim.fit_linewidth_ratio - 1.0) <= 0.10,
           fmt("fitted Lorentzian linewidth / gamma_m = %.4f (+/- 10%%)", sim.fit_linewidth_ratio));
  rep.line("AC13.20", sim_ok && sim.fdt_fraction >= 0.99,
           fmt("fluctuation-dissipation: %.1f%% of in-band bins within 3 sigma (%.3f) of S_F |chi_m|^2 (>= 99%%)",
               100.0 * sim.fdt_fraction, sim.fdt_bound));

  S21Sweep sweep;
  for (int i = 0; i < 100; ++i) {
    const double f = 5e3 + 5e3 * i;
    sweep.frequencies.push_back(f);
    sweep.s21_power.push_back(1e-4 * (1.0 + 0.8 * std::sin(f / 2e4)) * (1.0 + f / 2e5));
  }
  sweep.reference_freq = 20e3;
  sweep.v_ref = 1e-3;
  sweep.v_max = 1.0;
  sweep.drive_voltage = 0.707;
  const PropagationPath path;

  rep.guarded("AC13.21", "S21 rescale", [&](bool& pass) {
    const auto d0 = pzt_displacement(sweep, 1555e-9).displacement.real();
    pass = true;
    for (int i = 0; i < 20; ++i) {
      S21Sweep s = sweep;
      const double k = log_uniform(g, 1e-6, 1e6);
      for (auto& p : s.s21_power) p *= k;
      const auto d = pzt_displacement(s, 1555e-9).displacement.real();
      for (std::size_t j = 0; j < d.size(); ++j) pass = pass && rel_ok(d[j], d0[j], 1e-13);
    }
    return std::string("pzt_displacement invariant under global S21 rescaling");
  });

  rep.guarded("AC13.22", "chain linear in drive", [&](bool& pass) {
    const auto p0 = applied_pressure(sweep, 1555e-9, path, air).sensor.real();
    pass = true;
    for (double k : {0.5, 2.0, 7.0}) {
      S21Sweep s = sweep;
      s.v_ref *= k;
      const auto p = applied_pressure(s, 1555e-9, path, air).sensor.real();
      for (std::size_t j = 0; j < p.size(); ++j) pass = pass && rel_ok(p[j], k * p0[j], 1e-13);
    }
    return std::string("calibration chain linear in drive amplitude");
  });

  rep.guarded("AC13.23", "diffraction scaling", [&](bool& pass) {
    pass = true;
    for (int i = 0; i < 100; ++i) {
      PropagationPath p;
      p.distance = log_uniform(g, 0.01, 1.0);
      p.aperture_side = log_uniform(g, 1e-3, 3e-2);
      p.shape = i % 2 ? ApertureShape::Square : ApertureShape::Circular;
      PropagationPath q = p;
      q.aperture_side *= 2.0;
      q.distance *= 4.0;
      const double f = log_uniform(g, 1e3, 1e6);
      pass = pass && rel_ok(diffraction_factor(p, f, air), diffraction_factor(q, f, air), kExact);
    }
    return std::string("diffraction_factor invariant under (a -> 2a, L -> 4L)");
  });

  rep.guarded("AC13.24", "responsivity inversion", [&](bool& pass) {
    const auto applied = applied_pressure(sweep, 1555e-9, path, air);
    const auto& f = applied.sensor.axis();
    std::vector<double> truth(f.size()), v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      truth[i] = 0.05 + 1.0 / (1.0 + std::pow((f[i] - 315e3) / 3e3, 2));
      v[i] = truth[i] * applied.sensor.real()[i];
    }
    const auto r = responsivity(SpectrumSeries(f, v, "V", SpectrumConvention::PointValues), applied.sensor);
    pass = true;
    for (std::size_t i = 0; i < f.size(); ++i) pass = pass && rel_ok(r.values.real()[i], truth[i], 1e-12);
    return std::string("responsivity recovers R(f) from V = R P exactly");
  });

  rep.guarded("AC13.25", "c_min homogeneity", [&](bool& pass) {
    const LaserPulse pulse{1e-6, 1e-6, 50e-6};
    const GasLine line{4.7e-19, 0.06, 1.65e-6};
    const double w = to_angular(318e3);
    const double c0 = min_concentration(air, line, pulse, 84e-6, 100e-6, w).number_density;
    pass = true;
    for (int i = 0; i < 20; ++i) {
      const double k = log_uniform(g, 1e-3, 1e3);
      LaserPulse p2 = pulse;
      p2.energy *= k;
      pass = pass && rel_ok(min_concentration(air, line, p2, 84e-6, 100e-6, w).number_density, c0 / k, kExact);
      pass = pass && rel_ok(min_concentration(air, line, pulse, 84e-6 * k, 100e-6, w).number_density, c0 * k, kExact);
    }
    return std::string("c_min homogeneous of degree -1 in E and +1 in P_eff,min");
  });

  const auto geom = microdisk_geometry();
  rep.guarded("AC13.26", "overlap bound", [&](bool& pass) {
    const auto shape = flapping_modeshape(geom, 121e-6);
    pass = true;
    for (int i = 0; i < 20; ++i) {
      std::vector<double> field(shape.size());
      double peak = 0.0;
      const double amp = log_uniform(g, 1e-3, 1e3);
      for (auto& x : field) {
        x = amp * std::uniform_real_distribution<double>(-1.0, 1.0)(g);
        peak = std::max(peak, std::abs(x));
      }
      pass = pass && std::abs(mode_overlap(shape, field)) <= peak;
    }
    return std::string("|zeta| <= max |dp| for random fields");
  });

  rep.guarded("AC13.27", "effective mass bound", [&](bool& pass) {
    const double total = derive_geometry(geom).total_mass;
    pass = true;
    for (int i = 0; i < 20; ++i) {
      const double node = std::uniform_real_distribution<double>(82.5e-6, 147.5e-6)(g);
      pass = pass && effective_mass(flapping_modeshape(geom, node, 60, 16), geom.thickness, geom.density) <= total;
    }
    pass = pass && effective_mass(piston_modeshape(geom), geom.thickness, geom.density) <= total * (1.0 + 1e-12);
    return std::string("effective_mass <= total mass");
  });

  rep.guarded("AC13.28", "flattening area", [&](bool& pass) {
    pass = true;
    for (int i = 0; i < 50; ++i) {
      const double peak = log_uniform(g, 1e-30, 1e-10), gam = log_uniform(g, 1.0, 1e5);
      const double ge = cooled_linewidth(gam, log_uniform(g, 0.0 + 1e-3, 1e4));
      pass = pass && rel_ok(flattened_peak(peak, gam, ge) * ge, peak * gam, 1e-14);
    }
    return std::string("gamma_eff * peak_eff = gamma * peak under flattening");
  });

  rep.guarded("AC13.29", "manifest rerun", [&](bool& pass) {
    const auto cfg = load_config(source_dir / "configs" / "microdisk.yaml");
    const fs::path a = work_dir / "a", b = work_dir / "b";
    fs::remove_all(work_dir);
    cmd_detuning_sweep(cfg, {a, false});
    RunManifest m;
    m.command = "detuning-sweep";
    m.config_path = fs::absolute(source_dir / "configs" / "microdisk.yaml").string();
    m.output_dir = a.string();
    m.version = tool_version();
    write_manifest(m, a);
    const auto back = RunManifest::load(a / "manifest.json");
    cmd_detuning_sweep(load_config(back.config_path, back.overrides), {b, false});
    pass = true;
    for (const char* f : {"detuning_curve.csv", "transmission.csv", "summary.json"}) {
      pass = pass && slurp(a / f) == slurp(b / f) && !slurp(a / f).empty();
    }
    return std::string("re-running from manifest.json reproduces outputs bit-identically");
  });

  rep.guarded("AC13.30", "exit codes", [&](bool& pass) {
    const int c = exit_code_for(ErrorKind::Config), d = exit_code_for(ErrorKind::Data),
              v = exit_code_for(ErrorKind::Diverged);
    pass = c != 0 && d != 0 && v != 0 && c != d && d != v && c != v;
    return fmt("exit codes: config %d, data %d, divergence %d", c, d, v);
  });

  const int ac13_failed = rep.failed - failed_before;
  std::printf("%-9s %s  property suite: %d of 31 property lines failed%s\n", "AC13", ac13_failed ? "FAIL" : "PASS",
              ac13_failed, ac13_failed ? " (see lines above)" : "");

  std::printf("\n%d failing line(s), %d of them known-unattainable\n", rep.failed, rep.failed_known);
  return rep.failed == rep.failed_known ? 0 : 1;
}
