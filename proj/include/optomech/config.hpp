#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "optomech/applications.hpp"
#include "optomech/calibration.hpp"
#include "optomech/model.hpp"
#include "optomech/noise.hpp"
#include "optomech/response.hpp"
#include "optomech/timedomain.hpp"

// Run configuration loaded from YAML. Lengths in m, rates in rad/s. Every rate
// key also accepts a `<key>_hz` alias in cyclic units (multiplied by 2 pi on
// load); giving both is an error. The full schema is in docs/config.md.
namespace optomech {

struct NamedMode {
  std::string name;
  MechanicalMode mode;
};

struct SweepSettings {
  double drive_frequency = 0.0;  // rad/s
  double detuning_min = 0.0;     // rad/s
  double detuning_max = 0.0;
  std::size_t points = 401;
};

struct NoiseSettings {
  double f_min = 1e3;  // Hz
  double f_max = 1e6;
  std::size_t points = 2000;
  bool log_spacing = true;
  double drive_frequency = 0.0;  // rad/s, where the NEP is reported; 0 = first mode
  OneOverF one_over_f;
};

struct TraceGasSettings {
  LaserPulse pulse;
  GasLine line;
  double distance = 0.0;            // m
  double min_pressure = 0.0;        // Pa/sqrt(Hz), NEP at the mode
  double mode_frequency = 0.0;      // rad/s
};

struct CellVibrationSettings {
  double frequency = 0.0;     // Hz
  double displacement = 0.0;  // m
  double nep = 0.0;           // Pa/sqrt(Hz), 0 skips the detectability check
  double bandwidth = 1.0;     // Hz
};

struct CoolingSettings {
  double mode_frequency = 0.0;  // rad/s
  double quality_factor = 0.0;
  /// Used as given when set; otherwise computed from the cavity.
  std::optional<double> cooperativity;
};

struct LdrSettings {
  double nep = 0.0;               // Pa/sqrt(Hz)
  double max_pressure = 0.0;      // Pa
  double integration_time = 1.0;  // s
  // Optional SNR-based NEP estimate.
  double applied_pressure = 0.0;  // Pa
  double snr_db = 0.0;
  double snr_integration_time = 0.0;  // s
};

struct ForceSensitivitySettings {
  double nep = 0.0;   // Pa/sqrt(Hz)
  double area = 0.0;  // m^2
  double rayleigh_length = 0.0;       // m
  double acoustic_wavelength = 0.0;   // m
};

struct CalibrationSettings {
  std::filesystem::path s21_csv;       // network analyzer export
  std::filesystem::path measured_csv;  // optional spectrum analyzer export
  double reference_freq = 0.0;         // Hz
  double v_ref = 0.0;
  double v_max = 0.0;
  double drive_voltage = 0.0;
  double wavelength = 1555e-9;         // interferometer laser, m
  double load_resistance = 50.0;       // ohm, converts analyzer power to voltage
  double resolution_bandwidth = 1.0;   // Hz, analyzer RBW
  PropagationPath path;
};

struct SimulateSettings {
  std::string mode;  // name in `modes`; empty = first
  SimulationConfig sim;
  std::size_t psd_segments = 64;
  /// Write every n-th recorded sample to trace.csv.
  std::size_t trace_stride = 1;
  bool detector = false;
};

struct RunConfig {
  std::filesystem::path source;
  SensorGeometry geometry;
  GasEnvironment gas;
  OpticalCavity cavity;
  CouplingKind kind = CouplingKind::Dispersive;
  std::vector<NamedMode> modes;
  /// Explicit pressure-to-force area; when unset it is derived from the geometry.
  std::optional<double> sensing_area;
  /// Viscous length (cyclic convention) replacing the modes' gas damping in the NEP.
  std::optional<double> gas_length;
  double detection_efficiency = 1.0;

  SweepSettings sweep;
  NoiseSettings noise;
  TraceGasSettings trace_gas;
  CellVibrationSettings cell_vibration;
  CoolingSettings cooling;
  LdrSettings ldr;
  ForceSensitivitySettings force_sensitivity;
  CalibrationSettings calibration;
  SimulateSettings simulate;

  double area() const;
  const NamedMode& mode(const std::string& name = {}) const;
};

/// Parses YAML text. Overrides are `dotted.key=value` assignments applied to
/// the document before it is interpreted; list entries are addressed by index
/// (`modes.0.resonance_freq_hz=318e3`). Errors throw Error{Config} naming the
/// field and, where known, the line.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {},
                       const std::filesystem::path& source = {});
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

}  // namespace optomech
