#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/response.hpp"

// Noise budgets and noise-equivalent pressure.
//
// Frequency convention: thermal force terms use cyclic damping rates
// (gamma / 2 pi) and cyclic-convention viscous lengths, S_T = 2 (m gamma_cyc +
// mu l) k_B T. Evaluated this way the NEP reproduces the measured device's
// ~100 uPa/sqrt(Hz) on resonance and ~1 uPa/sqrt(Hz) in the gas-damping limit.
// It is not the physical single-sided force PSD (4 m gamma k_B T); see
// langevin_force_psd() in timedomain.hpp for that one.
namespace optomech {

/// S_T = 2 (m gamma_cyc + mu l) k_B T, gamma the intrinsic rate, l the viscous length.
double thermal_force_psd(const MechanicalMode& mode, double gas_length, const GasEnvironment& gas);

/// Same, with the gas term taken from mode.gas_damping: S_T = 2 m gamma_m,cyc k_B T.
double thermal_force_psd(const MechanicalMode& mode, const GasEnvironment& gas);

enum class NoiseTerm { Gas, Intrinsic, Shot, OneOverF };
const char* to_string(NoiseTerm term);

struct NepInputs {
  MechanicalMode mode;
  GasEnvironment gas;
  /// Viscous length (cyclic convention). When unset, mode.gas_damping is used.
  std::optional<double> gas_length;
  OpticalCavity cavity;  // photon_number == 0 disables the shot term
  double area = 0.0;     // m^2
  CouplingKind kind = CouplingKind::Dispersive;
  double omega = 0.0;      // acoustic drive, rad/s
  double detuning = 0.0;   // rad/s
  double detection_efficiency = 1.0;  // eta, N -> eta N
};

/// Pressure-referred PSD terms (Pa^2/Hz) and the resulting NEP.
struct NepBreakdown {
  double intrinsic = 0.0;
  double gas = 0.0;
  double shot = 0.0;
  double nep = 0.0;  // Pa/sqrt(Hz)
  NoiseTerm dominant = NoiseTerm::Gas;
};

/// P_min = sqrt(2 (mu l + m gamma_cyc) k_B T + 1 / (eta N |chi|^2)) / (r zeta A).
NepBreakdown nep_breakdown(const NepInputs& in);
double nep(const NepInputs& in);

/// P_min = sqrt(tau / SNR) P_applied.
double nep_from_snr(double applied_pressure, double snr_power, double integration_time);

/// LDR = 20 log10(P_max / (P_min / sqrt(tau))), in dB.
double ldr(double nep, double max_pressure, double integration_time);

/// Force-referred sensitivity in N/sqrt(Hz).
double force_sensitivity(double nep, double area);

struct OneOverF {
  double amplitude_at_1hz = 0.0;  // PSD at 1 Hz, in the spectrum unit
  double exponent = 1.0;
};

/// One transduced thermomechanical peak. gain converts displacement PSD (m^2/Hz)
/// into the spectrum unit.
struct ModeNoiseTerm {
  MechanicalMode mode;
  CouplingKind kind = CouplingKind::Dispersive;
  double gain = 1.0;
  std::string name;
};

struct NamedSeries {
  std::string name;
  NoiseTerm term;
  std::vector<double> values;
};

struct NoiseSpectrum {
  SpectrumSeries total;
  std::vector<NamedSeries> components;
};

/// PSD(f) = shot + A1 / f^alpha + sum_k gain_k S_T,k |chi_m,k(2 pi f)|^2,
/// each mode split into its intrinsic and gas-damping components.
NoiseSpectrum synthesize_noise_spectrum(std::span<const ModeNoiseTerm> modes, double shot_floor,
                                        const OneOverF& one_over_f, std::span<const double> f_grid,
                                        const GasEnvironment& gas, const std::string& unit = "arb^2/Hz");

/// Peak thermomechanical PSD of a mode (at the maximum of |chi_m|^2).
double thermomechanical_peak(const ModeNoiseTerm& term, const GasEnvironment& gas);

/// Shot level lying margin_db below a given peak.
double shot_floor_below(double peak, double margin_db);

struct Band {
  double f_lo = 0.0;
  double f_hi = 0.0;
  bool empty() const { return !(f_hi > f_lo); }
  double width() const { return empty() ? 0.0 : f_hi - f_lo; }
};

/// Exact crossing of one mode's thermomechanical PSD with a flat shot floor.
Band resonant_bandwidth(const ModeNoiseTerm& term, const GasEnvironment& gas, double shot_floor);

/// Contiguous band around the thermomechanical maximum where it exceeds shot,
/// evaluated on the series' own grid (edges linearly interpolated).
Band resonant_bandwidth(const SpectrumSeries& thermomechanical, const SpectrumSeries& shot);

struct SensitivityReport {
  double nep = 0.0;
  Band band;
  NoiseTerm dominant = NoiseTerm::Gas;
};

}  // namespace optomech
