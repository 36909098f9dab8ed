#include "optomech/response.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "optomech/parallel.hpp"

namespace optomech {

using cplx = std::complex<double>;
static constexpr cplx I{0.0, 1.0};

const char* to_string(CouplingKind kind) {
  return kind == CouplingKind::Dispersive ? "dispersive" : "dissipative";
}

CouplingKind parse_coupling_kind(const std::string& s) {
  if (s == "dispersive" || s == "disp") return CouplingKind::Dispersive;
  if (s == "dissipative" || s == "diss") return CouplingKind::Dissipative;
  fail(ErrorKind::InvalidArgument, "unknown coupling kind '" + s + "'");
}

OutputCoefficients output_coefficients(const OpticalCavity& cavity, double omega, double detuning) {
  cavity.validate();
  const double kin = cavity.input_coupling;
  const double kl = cavity.intrinsic_loss;
  const double k0 = cavity.total_decay();
  const double alpha = std::sqrt(cavity.photon_number);
  const cplx den_static = k0 + 2.0 * I * detuning;
  const cplx den = k0 + 2.0 * I * (detuning - omega);

  OutputCoefficients c;
  c.B = -2.0 * I * alpha * cavity.dispersive_coupling * kin / (den_static * den);
  c.C = 2.0 * alpha * cavity.dissipative_coupling * kin / den * (1.0 - 2.0 * kin / den_static);
  c.D = (kin - kl - 2.0 * I * (detuning - omega)) / den;
  c.E = std::sqrt(kin * kl) / den;
  return c;
}

cplx mech_susceptibility(const MechanicalMode& mode, double omega) {
  mode.validate();
  const double wm = mode.resonance_freq;
  const cplx inv = mode.effective_mass * (wm * wm - omega * omega - I * mode.total_damping() * omega);
  if (inv == cplx{0.0, 0.0}) {
    fail(ErrorKind::Singular, "undamped mode driven on resonance has unbounded susceptibility");
  }
  return 1.0 / inv;
}

cplx om_susceptibility(const OpticalCavity& cavity, const MechanicalMode& mode, CouplingKind kind,
                       double omega, double detuning) {
  cavity.validate();
  const double kin = cavity.input_coupling;
  const double kl = cavity.intrinsic_loss;
  const double k0 = cavity.total_decay();
  const double d2 = 4.0 * detuning * detuning;
  const cplx chi_m = mech_susceptibility(mode, omega);
  const cplx den = (d2 + k0 * k0) * (d2 + (k0 - 2.0 * I * omega) * (k0 - 2.0 * I * omega));
  if (kind == CouplingKind::Dispersive) {
    return 32.0 * cavity.dispersive_coupling * detuning * kin * chi_m * (k0 - I * omega) / den;
  }
  const cplx num = 2.0 * cavity.dissipative_coupling * kin *
                   (-k0 * (kin - kl) * (k0 - 2.0 * I * omega) + d2 * (k0 + 2.0 * kin - 2.0 * I * omega));
  return num * chi_m / den;
}

double transduction_coefficient(const OpticalCavity& cavity, CouplingKind kind, double detuning) {
  cavity.validate();
  const double kin = cavity.input_coupling;
  const double kl = cavity.intrinsic_loss;
  const double k0 = cavity.total_decay();
  const double d2 = 4.0 * detuning * detuning;
  const double lorentz = (d2 + k0 * k0);
  if (kind == CouplingKind::Dispersive) {
    return 2.0 * cavity.dispersive_coupling * kin * 16.0 * k0 * detuning / (lorentz * lorentz);
  }
  const double c_diss = -k0 * k0 * (kin - kl) + d2 * (k0 + 2.0 * kin);
  return 2.0 * cavity.dissipative_coupling * kin * c_diss / (lorentz * lorentz);
}

cplx om_susceptibility_lowfreq(const OpticalCavity& cavity, const MechanicalMode& mode,
                               CouplingKind kind, double omega, double detuning) {
  return transduction_coefficient(cavity, kind, detuning) * mech_susceptibility(mode, omega);
}

SpectrumSeries detuning_response_curve(const OpticalCavity& cavity, const MechanicalMode& mode,
                                       CouplingKind kind, double omega_drive,
                                       std::span<const double> detunings) {
  if (detunings.empty()) fail(ErrorKind::InvalidArgument, "detuning grid is empty");
  cavity.validate();
  mode.validate();
  std::vector<double> axis(detunings.begin(), detunings.end());
  std::vector<cplx> values(axis.size());
  parallel_for(axis.size(), [&](std::size_t i) {
    values[i] = om_susceptibility(cavity, mode, kind, omega_drive, axis[i]);
  });
  return SpectrumSeries(std::move(axis), std::move(values), "m/N", SpectrumConvention::PointValues,
                        "rad/s");
}

double optimal_detuning(const OpticalCavity& cavity, CouplingKind kind) {
  cavity.validate();
  const double k0 = cavity.total_decay();
  if (kind == CouplingKind::Dispersive) return k0 / (2.0 * std::sqrt(3.0));

  // |C^diss| / (4 Delta^2 + k0^2)^2 with x = 4 Delta^2 is |a + b x| / (x + k0^2)^2.
  const double kin = cavity.input_coupling;
  const double kl = cavity.intrinsic_loss;
  const double a = k0 * k0 * (kl - kin);
  const double b = k0 + 2.0 * kin;
  const auto f = [&](double x) { return std::abs(a + b * x) / ((x + k0 * k0) * (x + k0 * k0)); };
  double best_x = 0.0;
  const double x_star = k0 * k0 - 2.0 * a / b;
  if (x_star > 0.0 && f(x_star) > f(0.0)) best_x = x_star;
  return 0.5 * std::sqrt(best_x);
}

double optimal_detuning_at(const OpticalCavity& cavity, const MechanicalMode& mode,
                           CouplingKind kind, double omega) {
  cavity.validate();
  const double k0 = cavity.total_decay();
  const auto f = [&](double d) { return std::abs(om_susceptibility(cavity, mode, kind, omega, d)); };

  constexpr int kScan = 2000;
  const double hi = 3.0 * k0;
  const double step = hi / kScan;
  int best = 0;
  double best_val = f(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double v = f(i * step);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo_d = std::max(0.0, (best - 1) * step);
  double hi_d = (best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi_d - inv_phi * (hi_d - lo_d);
  double x2 = lo_d + inv_phi * (hi_d - lo_d);
  double f1 = f(x1), f2 = f(x2);
  while (hi_d - lo_d > 1e-12 * k0) {
    if (f1 < f2) {
      lo_d = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo_d + inv_phi * (hi_d - lo_d);
      f2 = f(x2);
    } else {
      hi_d = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi_d - inv_phi * (hi_d - lo_d);
      f1 = f(x1);
    }
  }
  const double d = 0.5 * (lo_d + hi_d);
  return f(d) >= f(0.0) ? d : 0.0;
}

double cavity_transmission(const OpticalCavity& cavity, double detuning) {
  return std::norm(output_coefficients(cavity, 0.0, detuning).D);
}

}  // namespace optomech
