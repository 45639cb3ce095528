#include "lab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

#include "common/error.hpp"

namespace bpl {
namespace {

const std::vector<std::string> kSections{"grid", "patch", "theta0", "kappa", "solver", "sweep", "output"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Value parsers throw a bare message; the caller prefixes line and key.
struct BadValue {
  std::string what;
};

double to_double(const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || v.empty()) throw BadValue{"expects a number, got '" + v + "'"};
  return x;
}

long long to_int(const std::string& v) {
  long long x = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || v.empty()) throw BadValue{"expects an integer, got '" + v + "'"};
  return x;
}

int to_int32(const std::string& v) {
  const long long x = to_int(v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw BadValue{"integer out of range: '" + v + "'"};
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t x = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || v.empty()) throw BadValue{"expects a non-negative integer, got '" + v + "'"};
  return x;
}

bool to_bool(const std::string& v) {
  std::string l = v;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "true" || l == "yes" || l == "on" || l == "1") return true;
  if (l == "false" || l == "no" || l == "off" || l == "0") return false;
  throw BadValue{"expects a boolean, got '" + v + "'"};
}

template <class T, class F>
std::vector<T> to_list(const std::string& v, F item) {
  std::vector<T> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(item(trim(tok)));
  return out;
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    if constexpr (std::is_floating_point_v<T>)
      os << fmt(v[i]);
    else
      os << v[i];
  }
  return os.str();
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

// Enum names go through the module parsers, which throw Config errors.
template <class F>
auto enum_value(const std::string& v, F parse) {
  try {
    return parse(v);
  } catch (const Error& e) {
    throw BadValue{e.what()};
  }
}

DtPolicy dt_policy_from_string(const std::string& v) {
  if (v == "cfl") return DtPolicy::Cfl;
  if (v == "fixed") return DtPolicy::Fixed;
  throw BadValue{"expects cfl or fixed, got '" + v + "'"};
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(LabConfig&, const std::string&)> set;
  std::function<std::string(const LabConfig&)> get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    auto add = [&](std::string s, std::string n, std::function<void(LabConfig&, const std::string&)> set,
                   std::function<std::string(const LabConfig&)> get) {
      k.push_back({std::move(s), std::move(n), std::move(set), std::move(get)});
    };
    // [grid]
    add("grid", "n", [](LabConfig& c, const std::string& v) { c.run.n = to_int32(v); },
        [](const LabConfig& c) { return std::to_string(c.run.n); });
    add("grid", "delta", [](LabConfig& c, const std::string& v) { c.run.delta = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.resolved_delta()); });
    add("grid", "seed", [](LabConfig& c, const std::string& v) { c.run.seed = to_u64(v); },
        [](const LabConfig& c) { return std::to_string(c.run.seed); });
    // [patch]
    add("patch", "shape",
        [](LabConfig& c, const std::string& v) { c.run.patch.shape = enum_value(v, patch_shape_from_string); },
        [](const LabConfig& c) { return to_string(c.run.patch.shape); });
    add("patch", "radius", [](LabConfig& c, const std::string& v) { c.run.patch.radius = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.patch.radius); });
    add("patch", "semi_a", [](LabConfig& c, const std::string& v) { c.run.patch.semi_a = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.patch.semi_a); });
    add("patch", "semi_b", [](LabConfig& c, const std::string& v) { c.run.patch.semi_b = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.patch.semi_b); });
    add("patch", "modes", [](LabConfig& c, const std::string& v) { c.run.patch.modes = to_list<int>(v, to_int32); },
        [](const LabConfig& c) { return fmt_list(c.run.patch.modes); });
    add("patch", "amplitudes",
        [](LabConfig& c, const std::string& v) { c.run.patch.amplitudes = to_list<double>(v, to_double); },
        [](const LabConfig& c) { return fmt_list(c.run.patch.amplitudes); });
    add("patch", "random_modes", [](LabConfig& c, const std::string& v) { c.run.patch.random_modes = to_int32(v); },
        [](const LabConfig& c) { return std::to_string(c.run.patch.random_modes); });
    add("patch", "random_amplitude",
        [](LabConfig& c, const std::string& v) { c.run.patch.random_amplitude = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.patch.random_amplitude); });
    add("patch", "epsilon", [](LabConfig& c, const std::string& v) { c.run.patch.epsilon = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.patch.epsilon); });
    // [theta0]
    add("theta0", "kind",
        [](LabConfig& c, const std::string& v) { c.run.theta0.kind = enum_value(v, theta0_kind_from_string); },
        [](const LabConfig& c) { return to_string(c.run.theta0.kind); });
    add("theta0", "amplitude", [](LabConfig& c, const std::string& v) { c.run.theta0.amplitude = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.theta0.amplitude); });
    add("theta0", "kmax", [](LabConfig& c, const std::string& v) { c.run.theta0.kmax = to_int32(v); },
        [](const LabConfig& c) { return std::to_string(c.run.theta0.kmax); });
    // [kappa]
    add("kappa", "kind",
        [](LabConfig& c, const std::string& v) { c.run.kappa.kind = enum_value(v, kappa_kind_from_string); },
        [](const LabConfig& c) { return to_string(c.run.kappa.kind); });
    add("kappa", "epsilon0", [](LabConfig& c, const std::string& v) { c.run.kappa.epsilon0 = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.kappa.epsilon0); });
    // [solver]
    add("solver", "mu", [](LabConfig& c, const std::string& v) { c.run.mu = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.mu); });
    add("solver", "t_end", [](LabConfig& c, const std::string& v) { c.run.t_end = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.t_end); });
    add("solver", "dt_policy", [](LabConfig& c, const std::string& v) { c.run.dt_policy = dt_policy_from_string(v); },
        [](const LabConfig& c) { return std::string(c.run.dt_policy == DtPolicy::Cfl ? "cfl" : "fixed"); });
    add("solver", "dt", [](LabConfig& c, const std::string& v) { c.run.dt = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.dt); });
    add("solver", "cfl_safety", [](LabConfig& c, const std::string& v) { c.run.cfl.safety = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.cfl.safety); });
    add("solver", "diffusive_const", [](LabConfig& c, const std::string& v) { c.run.cfl.diffusive_const = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.cfl.diffusive_const); });
    add("solver", "snapshots_per_unit",
        [](LabConfig& c, const std::string& v) { c.run.snapshots_per_unit = to_int32(v); },
        [](const LabConfig& c) { return std::to_string(c.run.snapshots_per_unit); });
    add("solver", "p_list", [](LabConfig& c, const std::string& v) { c.run.p_list = to_list<double>(v, to_double); },
        [](const LabConfig& c) { return fmt_list(c.run.p_list); });
    add("solver", "track_geometry", [](LabConfig& c, const std::string& v) { c.run.track_geometry = to_bool(v); },
        [](const LabConfig& c) { return fmt_bool(c.run.track_geometry); });
    add("solver", "lattice_n", [](LabConfig& c, const std::string& v) { c.run.lattice_n = to_int32(v); },
        [](const LabConfig& c) { return std::to_string(c.run.lattice_n); });
    add("solver", "contour_samples", [](LabConfig& c, const std::string& v) { c.run.contour_samples = to_int32(v); },
        [](const LabConfig& c) { return std::to_string(c.run.contour_samples); });
    add("solver", "probes", [](LabConfig& c, const std::string& v) { c.run.probes = to_bool(v); },
        [](const LabConfig& c) { return fmt_bool(c.run.probes); });
    add("solver", "jacobian_bound", [](LabConfig& c, const std::string& v) { c.run.bounds.jacobian = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.bounds.jacobian); });
    add("solver", "area_drift_bound", [](LabConfig& c, const std::string& v) { c.run.bounds.area_drift = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.bounds.area_drift); });
    add("solver", "tangency_bound", [](LabConfig& c, const std::string& v) { c.run.bounds.tangency = to_double(v); },
        [](const LabConfig& c) { return fmt(c.run.bounds.tangency); });
    // [sweep]
    add("sweep", "mu_list", [](LabConfig& c, const std::string& v) { c.sweep.mu_list = to_list<double>(v, to_double); },
        [](const LabConfig& c) { return fmt_list(c.sweep.mu_list); });
    add("sweep", "t_star", [](LabConfig& c, const std::string& v) { c.sweep.t_star = to_double(v); },
        [](const LabConfig& c) { return fmt(c.sweep.t_star); });
    add("sweep", "p_list", [](LabConfig& c, const std::string& v) { c.sweep.p_list = to_list<double>(v, to_double); },
        [](const LabConfig& c) { return fmt_list(c.sweep.p_list); });
    add("sweep", "measure_floor", [](LabConfig& c, const std::string& v) { c.sweep.measure_floor = to_bool(v); },
        [](const LabConfig& c) { return fmt_bool(c.sweep.measure_floor); });
    add("sweep", "floor_factor", [](LabConfig& c, const std::string& v) { c.sweep.floor_factor = to_double(v); },
        [](const LabConfig& c) { return fmt(c.sweep.floor_factor); });
    add("sweep", "threads", [](LabConfig& c, const std::string& v) { c.sweep.threads = to_int32(v); },
        [](const LabConfig& c) { return std::to_string(c.sweep.threads); });
    // [output]
    add("output", "dir", [](LabConfig& c, const std::string& v) { c.output.dir = v; },
        [](const LabConfig& c) { return c.output.dir; });
    add("output", "snapshots", [](LabConfig& c, const std::string& v) { c.output.snapshots = to_bool(v); },
        [](const LabConfig& c) { return fmt_bool(c.output.snapshots); });
    add("output", "plots", [](LabConfig& c, const std::string& v) { c.output.plots = to_bool(v); },
        [](const LabConfig& c) { return fmt_bool(c.output.plots); });
    return k;
  }();
  return table;
}

[[noreturn]] void line_error(int line, const std::string& what) {
  fail(ErrorCode::Config, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

LabConfig parse_config(const std::string& text, const std::vector<std::string>& required) {
  LabConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  std::vector<std::string> seen_keys;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') line_error(line, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end())
        line_error(line, "unknown section [" + section + "]");
      if (std::find(cfg.sections.begin(), cfg.sections.end(), section) != cfg.sections.end())
        line_error(line, "duplicate section [" + section + "]");
      cfg.sections.push_back(section);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) line_error(line, "expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) line_error(line, "key '" + key + "' appears before any section");
    const auto it = std::find_if(keys().begin(), keys().end(),
                                 [&](const Key& k) { return k.section == section && k.name == key; });
    if (it == keys().end()) line_error(line, "unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (std::find(seen_keys.begin(), seen_keys.end(), full) != seen_keys.end())
      line_error(line, "duplicate key '" + key + "' in [" + section + "]");
    seen_keys.push_back(full);
    try {
      it->set(cfg, value);
    } catch (const BadValue& b) {
      line_error(line, "key '" + key + "' " + b.what);
    }
  }
  for (const std::string& r : required)
    if (std::find(cfg.sections.begin(), cfg.sections.end(), r) == cfg.sections.end())
      line_error(line, "missing required section [" + r + "]");

  try {
    cfg.run.kappa = KappaProfile::make(cfg.run.kappa.kind, cfg.run.kappa.epsilon0);
  } catch (const Error& e) {
    fail(ErrorCode::Config, e.what());
  }
  cfg.run.validate();
  validate_sweep(cfg.sweep);
  if (cfg.output.dir.empty()) fail(ErrorCode::Config, "output dir must not be empty");
  return cfg;
}

LabConfig load_config(const std::string& path, const std::vector<std::string>& required) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), required);
}

std::string config_to_text(const LabConfig& cfg) {
  std::ostringstream os;
  os << "# resolved configuration\n";
  std::string section;
  for (const Key& k : keys()) {
    if (k.section != section) {
      section = k.section;
      os << "\n[" << section << "]\n";
    }
    os << k.name << " = " << k.get(cfg) << "\n";
  }
  return os.str();
}

}  // namespace bpl
