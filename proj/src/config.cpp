#include "optomech/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace optomech {

namespace {

class Section {
 public:
  Section(YAML::Node node, std::string path, const std::string* source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {
    if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap()) {
      error(node_, path_, "expected a mapping");
    }
  }

  bool present() const { return node_.IsDefined() && !node_.IsNull(); }
  bool has(const std::string& key) const { return present() && node_[key].IsDefined(); }

  double number(const std::string& key, double fallback) {
    auto v = optional_number(key);
    return v ? *v : fallback;
  }
  double required_number(const std::string& key) {
    auto v = optional_number(key);
    if (!v) error(node_, field(key), "missing required value");
    return *v;
  }
  std::optional<double> optional_number(const std::string& key) {
    const YAML::Node n = lookup(key);
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    return as_double(n, field(key));
  }

  /// Rate in rad/s; `<key>_hz` gives it in Hz.
  std::optional<double> optional_rate(const std::string& key) {
    const auto rad = optional_number(key);
    const auto hz = optional_number(key + "_hz");
    if (rad && hz) error(node_[key], field(key), "give either '" + key + "' or '" + key + "_hz', not both");
    if (hz) return to_angular(*hz);
    return rad;
  }
  double rate(const std::string& key, double fallback) {
    auto v = optional_rate(key);
    return v ? *v : fallback;
  }
  double required_rate(const std::string& key) {
    auto v = optional_rate(key);
    if (!v) error(node_, field(key), "missing required value (or '" + key + "_hz')");
    return *v;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const YAML::Node n = lookup(key);
    if (!n.IsDefined() || n.IsNull()) return fallback;
    if (!n.IsScalar()) error(n, field(key), "expected a string");
    return n.Scalar();
  }

  bool flag(const std::string& key, bool fallback) {
    const YAML::Node n = lookup(key);
    if (!n.IsDefined() || n.IsNull()) return fallback;
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      error(n, field(key), "expected true or false");
    }
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    const YAML::Node n = lookup(key);
    if (!n.IsDefined() || n.IsNull()) return fallback;
    try {
      return n.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      error(n, field(key), "expected a non-negative integer");
    }
  }

  Section child(const std::string& key) { return Section(lookup(key), field(key), source_); }

  YAML::Node raw(const std::string& key) { return lookup(key); }
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string* source() const { return source_; }

  /// Rejects keys that were never read, which catches typos.
  void finish() const {
    if (!present()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) error(kv.first, field(key), "unknown key");
    }
  }

  [[noreturn]] void error(const YAML::Node& at, const std::string& field, const std::string& what) const {
    std::ostringstream os;
    os << "config";
    if (source_ && !source_->empty()) os << " " << *source_;
    const auto mark = at.IsDefined() ? at.Mark() : node_.Mark();
    if (!mark.is_null()) os << ":" << mark.line + 1;
    os << ": field '" << field << "': " << what;
    fail(ErrorKind::Config, os.str());
  }

 private:
  YAML::Node lookup(const std::string& key) {
    used_.insert(key);
    if (!present()) return YAML::Node(YAML::NodeType::Undefined);
    return node_[key];
  }

  double as_double(const YAML::Node& n, const std::string& f) const {
    if (!n.IsScalar()) error(n, f, "expected a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      error(n, f, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  YAML::Node node_;
  std::string path_;
  const std::string* source_;
  std::set<std::string> used_;
};

template <class F>
void checked(Section& s, const std::string& field, F&& validate) {
  try {
    validate();
  } catch (const Error& e) {
    s.error(YAML::Node(YAML::NodeType::Undefined), field, e.what());
  }
}

void apply_override(YAML::Node root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(ErrorKind::Config, "override '" + assignment + "': expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string p; std::getline(ss, p, '.');) {
    if (p.empty()) fail(ErrorKind::Config, "override '" + assignment + "': empty key component");
    parts.push_back(p);
  }
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::Config, "override '" + assignment + "': " + e.msg);
  }
  YAML::Node cur = root;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    const bool last = i + 1 == parts.size();
    if (cur.IsSequence()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(p);
      } catch (const std::exception&) {
        fail(ErrorKind::Config, "override '" + key + "': '" + p + "' is not a list index");
      }
      if (idx >= cur.size()) fail(ErrorKind::Config, "override '" + key + "': index out of range");
      if (last) {
        cur[idx] = value;
        return;
      }
      YAML::Node next = cur[idx];
      cur.reset(next);
      continue;
    }
    if (!cur.IsMap() && !cur.IsNull()) {
      fail(ErrorKind::Config, "override '" + key + "': '" + p + "' is not inside a mapping");
    }
    if (last) {
      cur[p] = value;
      return;
    }
    if (!cur[p].IsDefined() || cur[p].IsNull()) cur[p] = YAML::Node(YAML::NodeType::Map);
    YAML::Node next = cur[p];
    cur.reset(next);
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base.parent_path() / path;
  return path;
}

MechanicalMode read_mode(Section& s) {
  MechanicalMode m;
  m.resonance_freq = s.required_rate("resonance_freq");
  m.intrinsic_damping = s.rate("intrinsic_damping", 0.0);
  m.gas_damping = s.rate("gas_damping", 0.0);
  m.effective_mass = s.required_number("effective_mass");
  m.overlap = s.number("overlap", 1.0);
  m.participation_ratio = s.number("participation_ratio", 1.0);
  return m;
}

void read_geometry(Section s, RunConfig& c) {
  if (!s.present()) return;
  auto& g = c.geometry;
  g.major_radius = s.required_number("major_radius");
  g.minor_radius = s.number("minor_radius", 0.0);
  g.thickness = s.required_number("thickness");
  g.density = s.required_number("density");
  g.substrate_gap = s.required_number("substrate_gap");
  g.active_fraction = s.number("active_fraction", 1.0);
  s.finish();
  checked(s, "geometry", [&] { g.validate(); });
}

void read_gas(Section s, RunConfig& c) {
  auto& g = c.gas;
  g.viscosity = s.number("viscosity", g.viscosity);
  g.temperature = s.number("temperature", g.temperature);
  g.sound_speed = s.number("sound_speed", g.sound_speed);
  g.acoustic_impedance = s.number("acoustic_impedance", g.acoustic_impedance);
  g.density = s.number("density", g.acoustic_impedance / g.sound_speed);
  g.heat_capacity = s.number("heat_capacity", g.heat_capacity);
  g.expansion_coeff = s.number("expansion_coeff", g.expansion_coeff);
  g.static_pressure = s.number("static_pressure", g.static_pressure);
  s.finish();
  checked(s, "gas", [&] { g.validate(); });
}

void read_cavity(Section s, RunConfig& c) {
  if (!s.present()) return;
  auto& k = c.cavity;
  k.intrinsic_loss = s.required_rate("intrinsic_loss");
  k.input_coupling = s.required_rate("input_coupling");
  k.dispersive_coupling = s.rate("dispersive_coupling", 0.0);
  k.dissipative_coupling = s.number("dissipative_coupling", 0.0);
  k.vacuum_coupling = s.rate("vacuum_coupling", 0.0);
  k.photon_number = s.number("photon_number", 0.0);
  k.wavelength = s.number("wavelength", k.wavelength);
  const YAML::Node d = s.raw("detuning");
  const bool optimal = d.IsDefined() && d.IsScalar() && d.Scalar() == "optimal";
  if (!optimal) k.detuning = s.rate("detuning", 0.0);
  else s.raw("detuning_hz");
  s.finish();
  checked(s, "cavity", [&] { k.validate(); });
  if (optimal) k.detuning = optimal_detuning(k, c.kind);
}

void read_modes(YAML::Node list, RunConfig& c, const std::string* source) {
  if (!list.IsDefined() || list.IsNull()) return;
  Section holder(YAML::Node(YAML::NodeType::Map), "modes", source);
  if (!list.IsSequence()) holder.error(list, "modes", "expected a list of modes");
  for (std::size_t i = 0; i < list.size(); ++i) {
    Section s(list[i], "modes." + std::to_string(i), source);
    NamedMode nm;
    nm.name = s.text("name", "mode" + std::to_string(i));
    nm.mode = read_mode(s);
    s.finish();
    checked(s, "modes." + std::to_string(i), [&] { nm.mode.validate(); });
    c.modes.push_back(std::move(nm));
  }
}

void read_sweep(Section s, RunConfig& c) {
  auto& w = c.sweep;
  if (!s.present() && !(c.cavity.total_decay() > 0.0)) return;
  w.drive_frequency = s.rate("drive_frequency", c.modes.empty() ? 0.0 : c.modes[0].mode.resonance_freq);
  const double k0 = c.cavity.total_decay();
  w.detuning_min = s.rate("detuning_min", -2.0 * k0);
  w.detuning_max = s.rate("detuning_max", 2.0 * k0);
  w.points = s.count("points", w.points);
  s.finish();
  if (w.points < 2 || !(w.detuning_max > w.detuning_min)) {
    s.error(YAML::Node(), "sweep", "need points >= 2 and detuning_max > detuning_min");
  }
}

void read_noise(Section s, RunConfig& c) {
  auto& n = c.noise;
  n.f_min = s.number("f_min", n.f_min);
  n.f_max = s.number("f_max", n.f_max);
  n.points = s.count("points", n.points);
  n.log_spacing = s.text("spacing", "log") == "log";
  n.drive_frequency = s.rate("drive_frequency", 0.0);
  Section f = s.child("one_over_f");
  n.one_over_f.amplitude_at_1hz = f.number("amplitude_at_1hz", 0.0);
  n.one_over_f.exponent = f.number("exponent", 1.0);
  f.finish();
  s.finish();
  if (!(n.f_min > 0.0) || !(n.f_max > n.f_min) || n.points < 2) {
    s.error(YAML::Node(), "noise", "need 0 < f_min < f_max and points >= 2");
  }
}

void read_trace_gas(Section s, RunConfig& c) {
  auto& t = c.trace_gas;
  Section p = s.child("pulse");
  t.pulse.energy = p.number("energy", 0.0);
  t.pulse.duration = p.number("duration", 0.0);
  t.pulse.beam_radius = p.number("beam_radius", 0.0);
  p.finish();
  Section l = s.child("line");
  t.line.line_intensity = l.number("line_intensity", 0.0);
  t.line.linewidth = l.number("linewidth", 0.0);
  t.line.wavelength = l.number("wavelength", 0.0);
  l.finish();
  t.distance = s.number("distance", 0.0);
  t.min_pressure = s.number("min_pressure", 0.0);
  t.mode_frequency = s.rate("mode_frequency", 0.0);
  s.finish();
}

void read_cell_vibration(Section s, RunConfig& c) {
  auto& v = c.cell_vibration;
  v.frequency = s.number("frequency", 0.0);
  v.displacement = s.number("displacement", 0.0);
  v.nep = s.number("nep", 0.0);
  v.bandwidth = s.number("bandwidth", 1.0);
  s.finish();
}

void read_cooling(Section s, RunConfig& c) {
  auto& k = c.cooling;
  k.mode_frequency = s.rate("mode_frequency", 0.0);
  k.quality_factor = s.number("quality_factor", 0.0);
  k.cooperativity = s.optional_number("cooperativity");
  s.finish();
}

void read_ldr(Section s, RunConfig& c) {
  auto& l = c.ldr;
  l.nep = s.number("nep", 0.0);
  l.max_pressure = s.number("max_pressure", 0.0);
  l.integration_time = s.number("integration_time", 1.0);
  l.applied_pressure = s.number("applied_pressure", 0.0);
  l.snr_db = s.number("snr_db", 0.0);
  l.snr_integration_time = s.number("snr_integration_time", 0.0);
  s.finish();
}

void read_force(Section s, RunConfig& c) {
  auto& f = c.force_sensitivity;
  f.nep = s.number("nep", 0.0);
  f.area = s.number("area", 0.0);
  f.rayleigh_length = s.number("rayleigh_length", 0.0);
  f.acoustic_wavelength = s.number("acoustic_wavelength", 0.0);
  s.finish();
}

void read_calibration(Section s, RunConfig& c) {
  auto& k = c.calibration;
  k.s21_csv = resolve(c.source, s.text("s21_csv", ""));
  k.measured_csv = resolve(c.source, s.text("measured_csv", ""));
  k.reference_freq = s.number("reference_freq", 0.0);
  k.v_ref = s.number("v_ref", 0.0);
  k.v_max = s.number("v_max", 0.0);
  k.drive_voltage = s.number("drive_voltage", 0.0);
  k.wavelength = s.number("wavelength", k.wavelength);
  k.load_resistance = s.number("load_resistance", k.load_resistance);
  k.resolution_bandwidth = s.number("resolution_bandwidth", k.resolution_bandwidth);
  Section p = s.child("path");
  k.path.distance = p.number("distance", k.path.distance);
  k.path.aperture_side = p.number("aperture_side", k.path.aperture_side);
  const std::string shape = p.text("shape", "square");
  if (shape == "square") k.path.shape = ApertureShape::Square;
  else if (shape == "circular") k.path.shape = ApertureShape::Circular;
  else p.error(p.raw("shape"), p.field("shape"), "expected 'square' or 'circular'");
  Section a = p.child("air");
  k.path.air.temperature = a.number("temperature", k.path.air.temperature);
  k.path.air.relative_humidity = a.number("relative_humidity", k.path.air.relative_humidity);
  k.path.air.pressure = a.number("pressure", k.path.air.pressure);
  a.finish();
  p.finish();
  s.finish();
}

void read_simulate(Section s, RunConfig& c) {
  auto& m = c.simulate;
  m.mode = s.text("mode", "");
  m.sim.dt = s.number("dt", 0.0);
  m.sim.duration = s.number("duration", 0.0);
  m.sim.seed = s.count("seed", 0);
  m.sim.thermal = s.flag("thermal", true);
  m.sim.equilibrium_start = s.flag("equilibrium_start", true);
  m.sim.initial_displacement = s.number("initial_displacement", 0.0);
  m.sim.initial_velocity = s.number("initial_velocity", 0.0);
  m.sim.record_every = s.count("record_every", 1);
  Section d = s.child("drive");
  m.sim.drive.amplitude = d.number("amplitude", 0.0);
  m.sim.drive.frequency = d.rate("frequency", 0.0);
  m.sim.drive.phase = d.number("phase", 0.0);
  d.finish();
  m.psd_segments = s.count("psd_segments", m.psd_segments);
  m.trace_stride = s.count("trace_stride", 1);
  if (m.trace_stride == 0) s.error(s.raw("trace_stride"), s.field("trace_stride"), "must be >= 1");
  m.detector = s.flag("detector", false);
  s.finish();
}

}  // namespace

double RunConfig::area() const {
  if (sensing_area) return *sensing_area;
  return optomech::sensing_area(geometry);
}

const NamedMode& RunConfig::mode(const std::string& name) const {
  if (modes.empty()) fail(ErrorKind::Config, "config defines no mechanical modes");
  if (name.empty()) return modes.front();
  for (const auto& m : modes) {
    if (m.name == name) return m;
  }
  fail(ErrorKind::Config, "no mode named '" + name + "'");
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                       const std::filesystem::path& source) {
  YAML::Node root;
  const std::string src = source.string();
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << "config " << src << ":" << e.mark.line + 1 << ": " << e.msg;
    fail(ErrorKind::Config, os.str());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) fail(ErrorKind::Config, "config " + src + ": top level must be a mapping");
  for (const auto& o : overrides) apply_override(root, o);

  static const std::set<std::string> kSections = {
      "coupling", "geometry", "gas", "modes", "cavity", "sensing_area", "gas_length",
      "detection_efficiency", "sweep", "noise", "trace_gas", "cell_vibration", "cooling", "ldr",
      "force_sensitivity", "calibration", "simulate"};
  RunConfig c;
  c.source = source;
  Section top(root, "", &src);
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kSections.count(key)) top.error(kv.first, key, "unknown key");
  }
  const std::string kind = top.text("coupling", "dispersive");
  try {
    c.kind = parse_coupling_kind(kind);
  } catch (const Error& e) {
    top.error(top.raw("coupling"), "coupling", e.what());
  }
  read_geometry(top.child("geometry"), c);
  read_gas(top.child("gas"), c);
  read_modes(top.raw("modes"), c, &src);
  read_cavity(top.child("cavity"), c);
  c.sensing_area = top.optional_number("sensing_area");
  c.gas_length = top.optional_number("gas_length");
  c.detection_efficiency = top.number("detection_efficiency", 1.0);
  read_sweep(top.child("sweep"), c);
  read_noise(top.child("noise"), c);
  read_trace_gas(top.child("trace_gas"), c);
  read_cell_vibration(top.child("cell_vibration"), c);
  read_cooling(top.child("cooling"), c);
  read_ldr(top.child("ldr"), c);
  read_force(top.child("force_sensitivity"), c);
  read_calibration(top.child("calibration"), c);
  read_simulate(top.child("simulate"), c);
  top.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Config, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), overrides, path);
}

}  // namespace optomech
