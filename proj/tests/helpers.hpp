#pragma once

#include <cmath>
#include <random>

#include "optomech/model.hpp"
#include "optomech/units.hpp"

namespace testing {

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

/// Device of the measured sensor.
inline optomech::SensorGeometry microdisk_geometry() {
  return {148e-6, 82e-6, 1.8e-6, 2650.0, 7.17e-6, 1.0};
}

/// Second-order flapping mode of the measured sensor.
inline optomech::MechanicalMode flapping_mode(double f_hz = 318e3) {
  using optomech::to_angular;
  return {to_angular(f_hz), to_angular(150.0), to_angular(1280.0), 110e-12, 0.14, 0.055};
}

inline optomech::OpticalCavity critical_cavity() {
  using optomech::to_angular;
  optomech::OpticalCavity c;
  c.intrinsic_loss = to_angular(56e6);
  c.input_coupling = to_angular(56e6);
  c.dispersive_coupling = to_angular(1.05e18);
  c.dissipative_coupling = 1e6;
  c.photon_number = 1e8;
  return c;
}

inline std::mt19937_64 rng(std::uint64_t seed = 12345) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline double log_uniform(std::mt19937_64& g, double lo, double hi) {
  return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

}  // namespace testing
