#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/response.hpp"

// Stochastic time-domain simulation of one mechanical mode,
//   m x'' + m gamma_m x' + k x = F_T(t) + r zeta A P_D(t),
// used as an independent check of the frequency-domain noise and response
// models.
//
// The (x, v) pair is advanced with the exact propagator of the linear SDE: the
// mean follows the matrix exponential of the drift and the Gaussian increment
// carries the exact per-step covariance. The drive is added through its
// analytic steady-state particular solution. There is no time-step bias, so
// statistics only depend on record length.
//
// Thermal force: white, single-sided PSD 4 m gamma_m k_B T per Hz (gamma_m in
// rad/s). This is the level that gives <x^2> = k_B T / k. A discretised force
// with this PSD has per-step variance S / (2 dt).
//
// Random numbers: std::mt19937_64 seeded with the configured seed, Gaussian
// variates from std::normal_distribution. Traces are bit-identical for a given
// seed within one build; other implementations should match statistically.
namespace optomech {

struct AcousticDrive {
  double amplitude = 0.0;  // Pa
  double frequency = 0.0;  // rad/s
  double phase = 0.0;      // rad; drive is amplitude * cos(frequency t + phase)
};

struct SimulationConfig {
  double dt = 0.0;        // integration step, s
  double duration = 0.0;  // s
  std::uint64_t seed = 0;
  AcousticDrive drive;
  bool thermal = true;
  /// Start from a draw of the thermal equilibrium distribution (thermal runs only).
  bool equilibrium_start = true;
  double initial_displacement = 0.0;
  double initial_velocity = 0.0;
  /// Keep every n-th step in the output trace.
  std::size_t record_every = 1;

  /// dt <= 0.05 min(2 pi / w_m, 1 / gamma_m); returns advisory warnings.
  std::vector<std::string> validate(const MechanicalMode& mode) const;
};

struct TimeTrace {
  std::vector<double> times;
  std::vector<double> displacement;
  std::optional<std::vector<double>> detector_signal;
  std::uint64_t seed = 0;
  double mode_frequency = 0.0;  // rad/s, for downstream validity checks
  std::vector<std::string> warnings;

  double sample_interval() const;
};

/// Physical single-sided thermal force PSD, 4 m gamma_m k_B T (N^2/Hz).
double langevin_force_psd(const MechanicalMode& mode, double temperature);

TimeTrace simulate_langevin(const MechanicalMode& mode, const GasEnvironment& gas, double area,
                            const SimulationConfig& cfg);
TimeTrace simulate_langevin(const MechanicalMode& mode, const GasEnvironment& gas,
                            const SensorGeometry& geom, const SimulationConfig& cfg);

/// Welch estimate (Hann window, 50% overlap, per-segment mean removed) with
/// the trace split into `segments` equal blocks. Single-sided, per Hz.
SpectrumSeries psd_estimate(const TimeTrace& trace, std::size_t segments);
SpectrumSeries welch_psd(std::span<const double> samples, double dt, std::size_t segment_length,
                         const std::string& unit = "m^2/Hz");

/// detector(t) = coefficient(Delta, kind) x(t), coefficient the omega -> 0
/// limit of the output-quadrature prefactor.
TimeTrace transduce(const TimeTrace& trace, const OpticalCavity& cavity, CouplingKind kind,
                    double detuning);

struct LorentzianFit {
  double resonance = 0.0;  // rad/s
  double linewidth = 0.0;  // rad/s (FWHM in angular units)
  double force_psd_over_mass2 = 0.0;
};

/// Weighted linear least squares of 1/PSD = a + b w^2 + c w^4 over [f_lo, f_hi] Hz.
LorentzianFit fit_lorentzian(const SpectrumSeries& psd, double f_lo, double f_hi);

/// Sample variance (mean removed).
double variance(std::span<const double> v);

}  // namespace optomech
