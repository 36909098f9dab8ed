#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "optomech/error.hpp"
#include "optomech/timedomain.hpp"

using namespace optomech;
using testing::rel_close;

namespace {

MechanicalMode sim_mode() {
  MechanicalMode m;
  m.resonance_freq = to_angular(315e3);
  m.intrinsic_damping = to_angular(150.0);
  m.gas_damping = to_angular(1280.0);
  m.effective_mass = 110e-12;
  m.overlap = 0.14;
  m.participation_ratio = 0.055;
  return m;
}

SimulationConfig thermal_cfg(double duration, std::uint64_t seed = 42) {
  SimulationConfig c;
  c.dt = 1.5e-7;
  c.duration = duration;
  c.seed = seed;
  c.record_every = 4;
  return c;
}

}  // namespace

TEST_CASE("same seed gives an identical trace, another seed does not") {
  const auto m = sim_mode();
  const auto gas = GasEnvironment::air();
  const auto a = simulate_langevin(m, gas, 5e-8, thermal_cfg(2e-3, 7));
  const auto b = simulate_langevin(m, gas, 5e-8, thermal_cfg(2e-3, 7));
  const auto c = simulate_langevin(m, gas, 5e-8, thermal_cfg(2e-3, 8));
  CHECK(a.displacement == b.displacement);
  CHECK(a.displacement != c.displacement);
  CHECK(a.seed == 7);
  CHECK(a.times.size() == a.displacement.size());
  CHECK(a.sample_interval() == doctest::Approx(6e-7));
}

TEST_CASE("thermal trace satisfies equipartition and its PSD fits the mode") {
  const auto m = sim_mode();
  const auto gas = GasEnvironment::air();
  const auto tr = simulate_langevin(m, gas, 5e-8, thermal_cfg(0.5, 2024));
  const double expect = kBoltzmann * gas.temperature / m.spring_constant();
  CHECK(rel_close(variance(tr.displacement), expect, 0.1));

  const auto psd = psd_estimate(tr, 40);
  const double fwhm = to_cyclic(m.total_damping());
  const double f0 = to_cyclic(m.resonance_freq);
  const auto fit = fit_lorentzian(psd, f0 - 2.0 * fwhm, f0 + 2.0 * fwhm);
  CHECK(rel_close(fit.resonance, m.resonance_freq, 1e-3));
  CHECK(rel_close(fit.linewidth, m.total_damping(), 0.1));
  const double s_f = langevin_force_psd(m, gas.temperature);
  CHECK(rel_close(fit.force_psd_over_mass2, s_f / (m.effective_mass * m.effective_mass), 0.1));
}

TEST_CASE("Welch estimate is normalized per Hz, single-sided") {
  std::mt19937_64 g(99);
  std::normal_distribution<double> n(0.0, 2.0);
  std::vector<double> x(1 << 18);
  for (auto& v : x) v = n(g);
  const double dt = 1e-6;
  const auto psd = welch_psd(x, dt, 1024);
  CHECK(psd.size() == 513);
  CHECK(psd.axis()[1] == doctest::Approx(1.0 / (1024 * dt)));
  double mean = 0.0;
  for (std::size_t k = 5; k < 500; ++k) mean += psd.real()[k];
  mean /= 495.0;
  CHECK(rel_close(mean, 2.0 * 4.0 * dt, 0.02));
  // Parseval: integral of the PSD equals the variance
  double integral = 0.0;
  for (std::size_t k = 0; k < psd.size(); ++k) integral += psd.real()[k] * psd.axis()[1];
  CHECK(rel_close(integral, 4.0, 0.02));
  CHECK_THROWS_AS(welch_psd(x, dt, 1), Error);
  CHECK_THROWS_AS(welch_psd(std::span<const double>(x.data(), 10), dt, 16), Error);
}

TEST_CASE("driven response has amplitude |chi_m| r zeta A P") {
  const auto m = sim_mode();
  const auto gas = GasEnvironment::air();
  for (double f : {300e3, 315e3, 330e3}) {
    SimulationConfig c;
    c.dt = 1e-7;
    c.duration = 2e-4;
    c.thermal = false;
    c.drive = {1e-3, to_angular(f), 0.3};
    // start on the steady-state orbit
    const auto chi = mech_susceptibility(m, c.drive.frequency);
    const double force = m.participation_ratio * m.overlap * 5e-8 * c.drive.amplitude;
    const auto x0 = chi * force * std::exp(std::complex<double>(0.0, -c.drive.phase));
    c.initial_displacement = x0.real();
    c.initial_velocity = (std::complex<double>(0.0, -c.drive.frequency) * x0).real();
    const auto tr = simulate_langevin(m, gas, 5e-8, c);
    double peak = 0.0;
    for (double x : tr.displacement) peak = std::max(peak, std::abs(x));
    CHECK(rel_close(peak, std::abs(chi) * force, 2e-3));
  }
}

TEST_CASE("undriven mode relaxes from its initial displacement") {
  const auto m = sim_mode();
  SimulationConfig c;
  c.dt = 1e-7;
  c.duration = 5e-4;
  c.thermal = false;
  c.initial_displacement = 1e-9;
  const auto tr = simulate_langevin(m, GasEnvironment::air(), 5e-8, c);
  // envelope decays as exp(-gamma t / 2)
  const double t_start = tr.times[tr.times.size() - 40];
  double tail = 0.0;
  for (std::size_t i = tr.times.size() - 40; i < tr.times.size(); ++i) {
    tail = std::max(tail, std::abs(tr.displacement[i]));
  }
  CHECK(rel_close(tail, 1e-9 * std::exp(-0.5 * m.total_damping() * t_start), 1e-2));
}

TEST_CASE("time step above 0.05 min(period, 1 / gamma) is rejected") {
  const auto m = sim_mode();
  auto c = thermal_cfg(1e-3);
  c.dt = 1e-6;
  try {
    c.validate(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
    CHECK(std::string(e.what()).find("dt") != std::string::npos);
  }
  c = thermal_cfg(1e-3);
  c.record_every = 0;
  CHECK_THROWS_AS(c.validate(m), Error);
  c = thermal_cfg(1e-3);
  CHECK(!c.validate(m).empty());  // short record warns
}

TEST_CASE("transduce scales by the quasi-static coefficient") {
  const auto m = sim_mode();
  const auto tr = simulate_langevin(m, GasEnvironment::air(), 5e-8, thermal_cfg(1e-4));
  auto cav = testing::critical_cavity();
  const double d = optimal_detuning(cav, CouplingKind::Dispersive);
  const auto out = transduce(tr, cav, CouplingKind::Dispersive, d);
  REQUIRE(out.detector_signal);
  const double k = transduction_coefficient(cav, CouplingKind::Dispersive, d);
  for (std::size_t i = 0; i < tr.displacement.size(); i += 17) {
    CHECK((*out.detector_signal)[i] == k * tr.displacement[i]);
  }
  const auto n_warn = tr.warnings.size();
  CHECK(out.warnings.size() == n_warn);
  cav.input_coupling = 1e6;
  cav.intrinsic_loss = 1e6;
  CHECK(transduce(tr, cav, CouplingKind::Dispersive, d).warnings.size() == n_warn + 1);
}

TEST_CASE("Lorentzian fit needs data in band") {
  std::vector<double> f{1.0, 2.0, 3.0};
  const SpectrumSeries s(f, std::vector<double>{1.0, 2.0, 1.0}, "m^2/Hz");
  try {
    fit_lorentzian(s, 0.0, 10.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
}

TEST_CASE("Lorentzian fit recovers an exact Lorentzian") {
  const double w0 = to_angular(100e3), g = to_angular(500.0), a = 3e-20;
  std::vector<double> f, s;
  for (int i = 0; i < 2001; ++i) {
    const double fi = 98e3 + i * 2.0;
    const double w = to_angular(fi);
    f.push_back(fi);
    s.push_back(a / ((w0 * w0 - w * w) * (w0 * w0 - w * w) + g * g * w * w));
  }
  const auto fit = fit_lorentzian(SpectrumSeries(f, s, "m^2/Hz"), 98e3, 102e3);
  CHECK(rel_close(fit.resonance, w0, 1e-9));
  CHECK(rel_close(fit.linewidth, g, 1e-6));
  CHECK(rel_close(fit.force_psd_over_mass2, a, 1e-6));
}
