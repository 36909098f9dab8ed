#pragma once

#include <complex>
#include <span>

#include "optomech/model.hpp"

namespace optomech {

enum class CouplingKind { Dispersive, Dissipative };

const char* to_string(CouplingKind kind);
CouplingKind parse_coupling_kind(const std::string& s);

/// Cavity output-field coefficients: a_out = (B - C) x_m + D a_in + E a_l.
/// The input amplitude alpha_in is taken as sqrt(N).
struct OutputCoefficients {
  std::complex<double> B, C, D, E;
};

OutputCoefficients output_coefficients(const OpticalCavity& cavity, double omega, double detuning);

/// chi_m(w) = 1 / (m (w_m^2 - w^2 - i gamma_m w)), in m/N.
/// Throws Error{Singular} for an undamped mode driven exactly on resonance.
std::complex<double> mech_susceptibility(const MechanicalMode& mode, double omega);

/// Full optomechanical susceptibility for either coupling.
std::complex<double> om_susceptibility(const OpticalCavity& cavity, const MechanicalMode& mode,
                                       CouplingKind kind, double omega, double detuning);

/// omega << kappa_0 form: 2 g kappa_in chi_m C^i / (4 Delta^2 + kappa_0^2)^2.
std::complex<double> om_susceptibility_lowfreq(const OpticalCavity& cavity,
                                               const MechanicalMode& mode, CouplingKind kind,
                                               double omega, double detuning);

/// Real detuning-dependent factor of the low-frequency form, i.e. chi / chi_m.
double transduction_coefficient(const OpticalCavity& cavity, CouplingKind kind, double detuning);

/// |chi| and arg(chi) over a strictly increasing detuning grid (rad/s).
SpectrumSeries detuning_response_curve(const OpticalCavity& cavity, const MechanicalMode& mode,
                                       CouplingKind kind, double omega_drive,
                                       std::span<const double> detunings);

/// Quasi-static (omega -> 0) optimum |Delta| of |chi|.
/// Dispersive: kappa_0 / (2 sqrt 3). Dissipative: 0 whenever kappa_l >= 5 kappa_in,
/// otherwise the interior maximum of |C^diss| / (4 Delta^2 + kappa_0^2)^2.
double optimal_detuning(const OpticalCavity& cavity, CouplingKind kind);

/// Maximizer of the full |chi(omega, Delta)| over Delta >= 0, found by a coarse
/// scan refined with golden-section search.
double optimal_detuning_at(const OpticalCavity& cavity, const MechanicalMode& mode,
                           CouplingKind kind, double omega);

/// T(Delta) = |D(0)|^2 = |(kappa_in - kappa_l - 2i Delta) / (kappa_0 + 2i Delta)|^2.
double cavity_transmission(const OpticalCavity& cavity, double detuning);

}  // namespace optomech
