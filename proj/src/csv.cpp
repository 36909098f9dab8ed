#include "optomech/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace optomech::csv {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void data_error(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ":" << line;
  os << ": " << what;
  fail(ErrorKind::Data, os.str());
}

double parse_double(const std::string& cell, const std::string& source, std::size_t line,
                    const std::string& column) {
  if (cell == "nan" || cell == "NaN") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    data_error(source, line, "column '" + column + "': cannot parse '" + cell + "' as a number");
  }
  return v;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  data_error(source, 1, "missing required column '" + name + "'");
}

std::vector<double> Table::numbers(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (c >= rows[i].size()) data_error(source, line_numbers[i], "row is missing column '" + name + "'");
    out.push_back(parse_double(rows[i][c], source, line_numbers[i], name));
  }
  return out;
}

Table parse(const std::string& text, const std::string& source) {
  Table t;
  t.source = source;
  const bool bom = text.compare(0, 3, "\xEF\xBB\xBF") == 0;
  std::istringstream in(bom ? text.substr(3) : text);
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++n;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto cells = split(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      data_error(source, n, "expected " + std::to_string(t.header.size()) + " fields, found " +
                                std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(n);
  }
  if (!have_header) data_error(source, 0, "no header row");
  return t;
}

Table read(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) data_error(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path.string());
}

std::vector<PressurePoint> read_pressure_sweep(const std::filesystem::path& path) {
  const Table t = read(path);
  const auto p = t.numbers("pressure_mbar");
  const auto g = t.numbers("gamma_total_hz");
  std::vector<PressurePoint> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0) || !(g[i] > 0.0)) {
      data_error(t.source, t.line_numbers[i], "pressure and damping must be > 0");
    }
    out.push_back({mbar_to_pa(p[i]), to_angular(g[i])});
  }
  return out;
}

NetworkAnalyzerTrace read_network_analyzer(const std::filesystem::path& path) {
  const Table t = read(path);
  NetworkAnalyzerTrace out;
  out.frequencies = t.numbers("freq_hz");
  const auto db = t.numbers("s21_db");
  out.s21_power.reserve(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (!std::isfinite(db[i]) && !(db[i] < 0.0)) {
      data_error(t.source, t.line_numbers[i], "s21_db must be finite or -inf");
    }
    out.s21_power.push_back(db_to_power_ratio(db[i]));
  }
  for (const auto& h : t.header) {
    if (h == "segment_scale") out.segment_scale = t.numbers("segment_scale");
  }
  return out;
}

SpectrumSeries read_spectrum_analyzer(const std::filesystem::path& path) {
  const Table t = read(path);
  auto f = t.numbers("freq_hz");
  const auto dbm = t.numbers("psd_dbm_hz");
  std::vector<double> w(dbm.size());
  for (std::size_t i = 0; i < dbm.size(); ++i) w[i] = 1e-3 * db_to_power_ratio(dbm[i]);
  try {
    return SpectrumSeries(std::move(f), std::move(w), "W/Hz");
  } catch (const Error& e) {
    data_error(t.source, 0, e.what());
  }
}

ModeshapeGrid read_modeshape(const std::filesystem::path& path) {
  const Table t = read(path);
  ModeshapeGrid g{t.numbers("x_m"), t.numbers("y_m"), t.numbers("u"), t.numbers("cell_area_m2")};
  g.validate();
  return g;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) data_error(tmp.string(), 0, "cannot open for writing");
    f << content;
    f.flush();
    if (!f) data_error(tmp.string(), 0, "write failed");
  }
  fs::rename(tmp, path);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_columns(const std::vector<std::string>& header,
                           const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) fail(ErrorKind::InvalidArgument, "header/column count mismatch");
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != n) fail(ErrorKind::InvalidArgument, "columns differ in length");
  }
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + header[j];
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      out += format_number(columns[j][i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_spectrum(const SpectrumSeries& s) {
  const auto v = s.is_complex() ? s.magnitude() : s.real();
  std::string out = "freq_hz,psd,unit\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += format_number(s.axis()[i]) + ',' + format_number(v[i]) + ',' + s.unit() + '\n';
  }
  return out;
}

std::string format_curve(const SpectrumSeries& s) {
  std::vector<double> mag = s.magnitude();
  std::vector<double> phase(s.size(), 0.0);
  if (s.is_complex()) {
    for (std::size_t i = 0; i < s.size(); ++i) phase[i] = std::arg(s.complex()[i]);
  }
  return format_columns({"detuning_rad_s", "magnitude", "phase_rad"}, {s.axis(), mag, phase});
}

std::string format_trace(const TimeTrace& trace, std::size_t stride) {
  if (stride == 0) fail(ErrorKind::InvalidArgument, "trace stride must be >= 1");
  std::string out = "t_s,x_m,detector\n";
  for (std::size_t i = 0; i < trace.times.size(); i += stride) {
    out += format_number(trace.times[i]) + ',' + format_number(trace.displacement[i]) + ',';
    if (trace.detector_signal) out += format_number((*trace.detector_signal)[i]);
    out += '\n';
  }
  return out;
}

std::string format_modeshape(const ModeshapeGrid& g) {
  return format_columns({"x_m", "y_m", "u", "cell_area_m2"}, {g.x, g.y, g.u, g.cell_area});
}

}  // namespace optomech::csv
