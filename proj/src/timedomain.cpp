#include "optomech/timedomain.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <sstream>

namespace optomech {

namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

// exp(A t) for A = [[0, 1], [-w0^2, -g]].
Mat2 propagator(double w0, double g, double t) {
  const double lambda = 0.5 * g;
  const double wd2 = w0 * w0 - lambda * lambda;
  double c = 1.0, s = t;
  if (wd2 > 0.0) {
    const double wd = std::sqrt(wd2);
    c = std::cos(wd * t);
    s = std::sin(wd * t) / wd;
  } else if (wd2 < 0.0) {
    const double mu = std::sqrt(-wd2);
    c = std::cosh(mu * t);
    s = std::sinh(mu * t) / mu;
  }
  const double e = std::exp(-lambda * t);
  return {{{e * (c + lambda * s), e * s}, {-w0 * w0 * e * s, e * (c - lambda * s)}}};
}

// Q = q int_0^dt exp(As) e2 e2^T exp(A^T s) ds by composite Gauss-Legendre.
Mat2 step_covariance(double w0, double g, double dt, double q) {
  static constexpr std::array<double, 8> x = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> w = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
      0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const double rate = std::max({w0, g, 1.0 / dt});
  const int panels = std::max(4, static_cast<int>(std::ceil(4.0 * rate * dt)));
  const double h = dt / panels;
  Mat2 Q{};
  for (int p = 0; p < panels; ++p) {
    const double a = p * h;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double s = a + 0.5 * h * (x[k] + 1.0);
      const Mat2 M = propagator(w0, g, s);
      const double u0 = M[0][1], u1 = M[1][1];
      const double wk = 0.5 * h * w[k] * q;
      Q[0][0] += wk * u0 * u0;
      Q[0][1] += wk * u0 * u1;
      Q[1][1] += wk * u1 * u1;
    }
  }
  Q[1][0] = Q[0][1];
  return Q;
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::vector<std::string> SimulationConfig::validate(const MechanicalMode& mode) const {
  mode.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::InvalidArgument, "simulation: dt must be > 0");
  if (!(duration > dt)) fail(ErrorKind::InvalidArgument, "simulation: duration must exceed dt");
  if (record_every == 0) fail(ErrorKind::InvalidArgument, "simulation: record_every must be >= 1");
  const double period = kTwoPi / mode.resonance_freq;
  const double g = mode.total_damping();
  const double limit = 0.05 * (g > 0.0 ? std::min(period, 1.0 / g) : period);
  if (dt > limit) {
    std::ostringstream os;
    os << "simulation: dt = " << dt << " s exceeds 0.05 min(2 pi / w_m, 1 / gamma_m) = " << limit
       << " s";
    fail(ErrorKind::InvalidArgument, os.str());
  }
  std::vector<std::string> warnings;
  if (duration < 100.0 * period) {
    warnings.emplace_back("duration is shorter than 100 mechanical periods");
  }
  if (thermal && g > 0.0 && duration < 200.0 / g) {
    warnings.emplace_back("duration is shorter than 200 damping times; equilibrium statistics will be noisy");
  }
  return warnings;
}

double TimeTrace::sample_interval() const {
  if (times.size() < 2) fail(ErrorKind::InvalidArgument, "trace has fewer than two samples");
  return times[1] - times[0];
}

double langevin_force_psd(const MechanicalMode& mode, double temperature) {
  return 4.0 * mode.effective_mass * mode.total_damping() * kBoltzmann * temperature;
}

TimeTrace simulate_langevin(const MechanicalMode& mode, const GasEnvironment& gas, double area,
                            const SimulationConfig& cfg) {
  TimeTrace trace;
  trace.warnings = cfg.validate(mode);
  if (!(area > 0.0)) fail(ErrorKind::InvalidArgument, "simulation: area must be > 0");
  trace.seed = cfg.seed;
  trace.mode_frequency = mode.resonance_freq;

  const double m = mode.effective_mass;
  const double w0 = mode.resonance_freq;
  const double g = mode.total_damping();
  const double kT = kBoltzmann * gas.temperature;
  const Mat2 M = propagator(w0, g, cfg.dt);

  // Cholesky factor of the per-step covariance.
  double l00 = 0.0, l10 = 0.0, l11 = 0.0;
  if (cfg.thermal) {
    const Mat2 Q = step_covariance(w0, g, cfg.dt, 2.0 * g * kT / m);
    l00 = std::sqrt(std::max(0.0, Q[0][0]));
    l10 = l00 > 0.0 ? Q[1][0] / l00 : 0.0;
    l11 = std::sqrt(std::max(0.0, Q[1][1] - l10 * l10));
  }

  // Steady-state response to the drive, x_p = Re[chi F exp(-i(w t + phi))].
  const double force = mode.participation_ratio * mode.overlap * area * cfg.drive.amplitude;
  const bool driven = force != 0.0;
  std::complex<double> xp_amp{0.0, 0.0};
  if (driven) xp_amp = mech_susceptibility(mode, cfg.drive.frequency) * force;
  const auto particular = [&](double t) -> std::array<double, 2> {
    if (!driven) return {0.0, 0.0};
    const std::complex<double> ph =
        std::exp(std::complex<double>(0.0, -(cfg.drive.frequency * t + cfg.drive.phase)));
    const std::complex<double> xc = xp_amp * ph;
    return {xc.real(), (std::complex<double>(0.0, -cfg.drive.frequency) * xc).real()};
  };

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  double y0, y1;  // homogeneous part (x - x_p, v - v_p)
  if (cfg.thermal && cfg.equilibrium_start) {
    y0 = std::sqrt(kT / mode.spring_constant()) * normal(rng);
    y1 = std::sqrt(kT / m) * normal(rng);
  } else {
    const auto p0 = particular(0.0);
    y0 = cfg.initial_displacement - p0[0];
    y1 = cfg.initial_velocity - p0[1];
  }

  const auto steps = static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
  const std::size_t samples = steps / cfg.record_every + 1;
  trace.times.reserve(samples);
  trace.displacement.reserve(samples);

  const double bound = 1e6 * (std::sqrt(kT / mode.spring_constant()) + std::abs(xp_amp) +
                              std::abs(cfg.initial_displacement) + 1e-30);
  for (std::size_t n = 0; n <= steps; ++n) {
    if (n % cfg.record_every == 0) {
      const double t = static_cast<double>(n) * cfg.dt;
      const double x = y0 + particular(t)[0];
      if (!std::isfinite(x) || std::abs(x) > bound) {
        std::ostringstream os;
        os << "integration diverged at t = " << t << " s; try dt <= "
           << 0.01 * kTwoPi / std::max(w0, g) << " s";
        fail(ErrorKind::Diverged, os.str());
      }
      trace.times.push_back(t);
      trace.displacement.push_back(x);
    }
    const double n0 = cfg.thermal ? normal(rng) : 0.0;
    const double n1 = cfg.thermal ? normal(rng) : 0.0;
    const double next0 = M[0][0] * y0 + M[0][1] * y1 + l00 * n0;
    const double next1 = M[1][0] * y0 + M[1][1] * y1 + l10 * n0 + l11 * n1;
    y0 = next0;
    y1 = next1;
  }
  return trace;
}

TimeTrace simulate_langevin(const MechanicalMode& mode, const GasEnvironment& gas,
                            const SensorGeometry& geom, const SimulationConfig& cfg) {
  return simulate_langevin(mode, gas, sensing_area(geom), cfg);
}

SpectrumSeries welch_psd(std::span<const double> samples, double dt, std::size_t segment_length,
                         const std::string& unit) {
  const std::size_t n = samples.size();
  const std::size_t L = segment_length;
  if (L < 2) fail(ErrorKind::InvalidArgument, "PSD segment must hold at least two samples");
  if (L > n) fail(ErrorKind::InvalidArgument, "PSD segment is longer than the trace");
  if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "PSD sample interval must be > 0");

  std::vector<double> window(L);
  double w2 = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(L)));
    w2 += window[i] * window[i];
  }
  const std::size_t bins = L / 2 + 1;
  const std::size_t hop = std::max<std::size_t>(1, L / 2);
  const std::size_t count = (n - L) / hop + 1;

  double* in = fftw_alloc_real(L);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(L), in, out, FFTW_ESTIMATE);
  }
  std::vector<double> acc(bins, 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    const double* seg = samples.data() + s * hop;
    double mean = 0.0;
    for (std::size_t i = 0; i < L; ++i) mean += seg[i];
    mean /= static_cast<double>(L);
    for (std::size_t i = 0; i < L; ++i) in[i] = (seg[i] - mean) * window[i];
    fftw_execute(plan);
    for (std::size_t k = 0; k < bins; ++k) acc[k] += out[k][0] * out[k][0] + out[k][1] * out[k][1];
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);

  const double fs = 1.0 / dt;
  const double norm = 1.0 / (fs * w2 * static_cast<double>(count));
  std::vector<double> freq(bins), psd(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    freq[k] = static_cast<double>(k) * fs / static_cast<double>(L);
    const bool edge = k == 0 || (L % 2 == 0 && k == bins - 1);
    psd[k] = acc[k] * norm * (edge ? 1.0 : 2.0);
  }
  return SpectrumSeries(std::move(freq), std::move(psd), unit);
}

SpectrumSeries psd_estimate(const TimeTrace& trace, std::size_t segments) {
  if (segments == 0) fail(ErrorKind::InvalidArgument, "PSD needs at least one segment");
  const std::size_t n = trace.displacement.size();
  if (segments > n / 2) fail(ErrorKind::InvalidArgument, "more PSD segments than the trace supports");
  return welch_psd(trace.displacement, trace.sample_interval(), n / segments, "m^2/Hz");
}

TimeTrace transduce(const TimeTrace& trace, const OpticalCavity& cavity, CouplingKind kind,
                    double detuning) {
  TimeTrace out = trace;
  const double coeff = transduction_coefficient(cavity, kind, detuning);
  std::vector<double> signal(trace.displacement.size());
  std::transform(trace.displacement.begin(), trace.displacement.end(), signal.begin(),
                 [coeff](double x) { return coeff * x; });
  out.detector_signal = std::move(signal);
  if (trace.mode_frequency > 0.1 * cavity.total_decay()) {
    out.warnings.emplace_back("mechanical frequency is not << kappa_0; quasi-static transduction is approximate");
  }
  return out;
}

LorentzianFit fit_lorentzian(const SpectrumSeries& psd, double f_lo, double f_hi) {
  const auto& f = psd.axis();
  const auto& s = psd.real();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= f_lo && f[i] <= f_hi && s[i] > 0.0) idx.push_back(i);
  }
  if (idx.size() < 5) fail(ErrorKind::InsufficientData, "Lorentzian fit needs at least 5 bins in band");
  const double ws = to_angular(0.5 * (f_lo + f_hi));
  Eigen::MatrixXd A(static_cast<Eigen::Index>(idx.size()), 3);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const double w = to_angular(f[idx[r]]);
    const double z = (w * w) / (ws * ws);
    const double S = s[idx[r]];
    const auto row = static_cast<Eigen::Index>(r);
    A(row, 0) = S;
    A(row, 1) = S * z;
    A(row, 2) = S * z * z;
  }
  const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(b);
  const double a = coef(0), bz = coef(1), c = coef(2);
  if (!(c > 0.0) || !(a > 0.0)) fail(ErrorKind::Data, "Lorentzian fit did not converge to a peak");
  LorentzianFit fit;
  const double w0sq = ws * ws * std::sqrt(a / c);
  fit.resonance = std::sqrt(w0sq);
  const double g2 = 2.0 * w0sq + (bz / c) * ws * ws;
  if (!(g2 > 0.0)) fail(ErrorKind::Data, "Lorentzian fit gave a negative linewidth");
  fit.linewidth = std::sqrt(g2);
  fit.force_psd_over_mass2 = std::pow(ws, 4) / c;
  return fit;
}

double variance(std::span<const double> v) {
  if (v.size() < 2) fail(ErrorKind::InvalidArgument, "variance needs at least two samples");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size() - 1);
}

}  // namespace optomech
