#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "optomech/applications.hpp"
#include "optomech/calibration.hpp"
#include "optomech/damping.hpp"
#include "optomech/model.hpp"
#include "optomech/timedomain.hpp"

// CSV ingestion and export. Files are comma separated with one header row;
// blank lines and lines starting with '#' are skipped. Columns are found by
// header name, so extra columns and any column order are accepted. Malformed
// input throws Error{Data} naming the file, line and column.
namespace optomech::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
  std::string source;

  /// Index of a required column.
  std::size_t column(const std::string& name) const;
  /// Numeric column, every cell must parse as a double.
  std::vector<double> numbers(const std::string& name) const;
};

Table parse(const std::string& text, const std::string& source = "<memory>");
Table read(const std::filesystem::path& path);

/// pressure_mbar, gamma_total_hz -> Pa and rad/s.
std::vector<PressurePoint> read_pressure_sweep(const std::filesystem::path& path);

struct NetworkAnalyzerTrace {
  std::vector<double> frequencies;  // Hz
  std::vector<double> s21_power;    // linear power ratio
  std::vector<double> segment_scale;  // optional column, empty when absent
};
/// freq_hz, s21_db and optionally segment_scale.
NetworkAnalyzerTrace read_network_analyzer(const std::filesystem::path& path);

/// freq_hz, psd_dbm_hz -> W/Hz.
SpectrumSeries read_spectrum_analyzer(const std::filesystem::path& path);

/// x_m, y_m, u, cell_area_m2.
ModeshapeGrid read_modeshape(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Generic numeric table. All columns must have equal length.
std::string format_columns(const std::vector<std::string>& header,
                           const std::vector<std::vector<double>>& columns);

/// freq_hz, psd, unit. Complex series are written as magnitudes.
std::string format_spectrum(const SpectrumSeries& s);
/// detuning_rad_s, magnitude, phase_rad.
std::string format_curve(const SpectrumSeries& s);
/// t_s, x_m, detector (empty when the trace has no detector signal).
std::string format_trace(const TimeTrace& trace, std::size_t stride = 1);
std::string format_modeshape(const ModeshapeGrid& g);

/// Round-trip safe formatting of one double (17 significant digits, "nan" and
/// "inf" spelled out).
std::string format_number(double v);

}  // namespace optomech::csv
