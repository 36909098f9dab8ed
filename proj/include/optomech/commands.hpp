#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optomech/config.hpp"

// Pipelines behind the command-line tool. Each command writes its CSV (and
// optionally SVG) outputs plus summary.json into the output directory and
// returns the summary.
namespace optomech {

using Json = nlohmann::ordered_json;

struct OutputOptions {
  std::filesystem::path dir;
  bool svg = false;
};

/// Everything needed to re-run a command; written as manifest.json.
struct RunManifest {
  std::string command;
  std::string subcommand;
  std::string config_path;
  std::string output_dir;
  std::vector<std::string> overrides;
  std::string version;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";

  Json to_json() const;
  static RunManifest from_json(const Json& j);
  static RunManifest load(const std::filesystem::path& path);
};

const char* tool_version();

void write_manifest(const RunManifest& m, const std::filesystem::path& dir);

Json cmd_detuning_sweep(const RunConfig& cfg, const OutputOptions& out);
Json cmd_noise_budget(const RunConfig& cfg, const OutputOptions& out);
Json cmd_calibrate(const RunConfig& cfg, const OutputOptions& out);
/// subcommand is one of trace-gas, cell-vib, cooling, ldr, force-sens.
Json cmd_applications(const RunConfig& cfg, const std::string& subcommand, const OutputOptions& out);
Json cmd_simulate(const RunConfig& cfg, const OutputOptions& out);

/// Frequency grid of the noise budget (Hz).
std::vector<double> noise_grid(const NoiseSettings& s);

}  // namespace optomech
