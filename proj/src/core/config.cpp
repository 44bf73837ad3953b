#include "core/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "core/errors.hpp"

namespace gpd {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// shortest representation that parses back exactly
std::string fmt_double(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos])))
      ++pos;
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, const std::string& where) {
  const double d = parse_double(v, where);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError(where + ": expected an integer, got '" + v + "'");
  return i;
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError(where + ": expected true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(item, where));
  }
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(v[i]);
  }
  return out;
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define KEY_DOUBLE(sec, name, field)                                   \
  {sec, name,                                                          \
   [](RunConfig& c, const std::string& v, const std::string& w) {     \
     c.field = parse_double(v, w);                                     \
   },                                                                  \
   [](const RunConfig& c) { return fmt_double(c.field); }}

#define KEY_INT(sec, name, field)                                      \
  {sec, name,                                                          \
   [](RunConfig& c, const std::string& v, const std::string& w) {     \
     c.field = parse_int(v, w);                                        \
   },                                                                  \
   [](const RunConfig& c) { return std::to_string(c.field); }}

#define KEY_BOOL(sec, name, field)                                     \
  {sec, name,                                                          \
   [](RunConfig& c, const std::string& v, const std::string& w) {     \
     c.field = parse_bool(v, w);                                       \
   },                                                                  \
   [](const RunConfig& c) {                                            \
     return std::string(c.field ? "true" : "false");                   \
   }}

// Full schema in canonical emission order; every documented key round-trips.
const std::vector<Key>& schema() {
  static const std::vector<Key> keys = {
      {"run", "scenario",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         if (v == "frontcollapse") c.scenario = ScenarioKind::FrontCollapse;
         else if (v == "footloose") c.scenario = ScenarioKind::FootLoose;
         else throw ConfigError(w + ": unknown scenario '" + v + "'");
       },
       [](const RunConfig& c) {
         return std::string(c.scenario == ScenarioKind::FrontCollapse
                                ? "frontcollapse"
                                : "footloose");
       }},
      {"run", "mode",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         if (v == "static_sweep") c.mode = RunMode::StaticSweep;
         else if (v == "erosion") c.mode = RunMode::Erosion;
         else throw ConfigError(w + ": unknown mode '" + v + "'");
       },
       [](const RunConfig& c) {
         return std::string(c.mode == RunMode::StaticSweep ? "static_sweep"
                                                           : "erosion");
       }},
      {"run", "R_over_t_values",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         c.r_over_t_values = parse_list(v, w);
       },
       [](const RunConfig& c) { return fmt_list(c.r_over_t_values); }},

      KEY_DOUBLE("geometry", "a", geometry.a),
      KEY_DOUBLE("geometry", "b", geometry.b),
      KEY_DOUBLE("geometry", "t", geometry.t),
      KEY_DOUBLE("geometry", "R_over_t", geometry.R_over_t),
      KEY_DOUBLE("geometry", "L", geometry.L),
      KEY_DOUBLE("geometry", "h", geometry.h),
      KEY_DOUBLE("geometry", "dx", geometry.dx),
      KEY_DOUBLE("geometry", "thickness", geometry.thickness),
      KEY_DOUBLE("geometry", "m_ratio", geometry.m_ratio),
      KEY_BOOL("geometry", "surface_correction", geometry.surface_correction),

      KEY_DOUBLE("material", "E", material.E),
      KEY_DOUBLE("material", "rho_i", material.rho_i),
      KEY_DOUBLE("material", "nu", material.nu),
      KEY_DOUBLE("material", "G0", material.G0),
      KEY_DOUBLE("material", "K_I", material.K_I),
      KEY_DOUBLE("material", "gamma", material.gamma),
      KEY_DOUBLE("material", "alpha", material.alpha),
      {"material", "s0_source",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         if (v == "G0") c.material.s0_source = S0Source::FromG0;
         else if (v == "K_I") c.material.s0_source = S0Source::FromKI;
         else throw ConfigError(w + ": s0_source must be G0 or K_I");
       },
       [](const RunConfig& c) {
         return std::string(c.material.s0_source == S0Source::FromG0 ? "G0"
                                                                     : "K_I");
       }},

      KEY_BOOL("gravity", "enabled", gravity.enabled),
      KEY_DOUBLE("gravity", "g", gravity.g),

      KEY_BOOL("support", "enabled", support.enabled),
      KEY_DOUBLE("support", "k_s", support.k_s),
      KEY_DOUBLE("support", "v_e", support.v_e),
      KEY_DOUBLE("support", "stage_dt", support.stage_dt),
      KEY_INT("support", "max_stages", support.max_stages),
      KEY_DOUBLE("support", "max_eroded_length", support.max_eroded_length),
      KEY_BOOL("support", "stop_on_fracture", support.stop_on_fracture),

      KEY_BOOL("buoyancy", "enabled", buoyancy.enabled),
      KEY_DOUBLE("buoyancy", "rho_w", buoyancy.rho_w),
      KEY_DOUBLE("buoyancy", "h", buoyancy.h),

      KEY_BOOL("moment", "enabled", moment.enabled),
      KEY_DOUBLE("moment", "M0", moment.M0),
      KEY_DOUBLE("moment", "f", moment.f),
      KEY_DOUBLE("moment", "band_width", moment.band_width),
      {"moment", "mode",
       [](RunConfig& c, const std::string& v, const std::string& w) {
         if (v == "constant") c.moment.mode = MomentMode::Constant;
         else if (v == "sinusoidal") c.moment.mode = MomentMode::Sinusoidal;
         else throw ConfigError(w + ": mode must be constant or sinusoidal");
       },
       [](const RunConfig& c) {
         return std::string(c.moment.mode == MomentMode::Constant
                                ? "constant"
                                : "sinusoidal");
       }},

      KEY_DOUBLE("integrator", "dt_safety", integrator.dt_safety),
      KEY_DOUBLE("integrator", "relax_tol", integrator.relax_tol),
      KEY_INT("integrator", "relax_max_iters", integrator.relax_max_iters),
      KEY_INT("integrator", "settle_steps", integrator.settle_steps),

      {"output", "dir",
       [](RunConfig& c, const std::string& v, const std::string&) {
         c.output.dir = v;
       },
       [](const RunConfig& c) { return c.output.dir; }},
      KEY_INT("output", "snapshot_every", output.snapshot_every),
      KEY_INT("output", "probe_every", output.probe_every),
  };
  return keys;
}

#undef KEY_DOUBLE
#undef KEY_INT
#undef KEY_BOOL

const Key* find_key(const std::string& section, const std::string& name) {
  for (const auto& k : schema()) {
    if (k.section == section && k.name == name) return &k;
  }
  return nullptr;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::vector<std::pair<std::string, std::string>> seen;  // section, key
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno);
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& k : schema()) known = known || k.section == section;
      if (!known)
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    if (section.empty())
      throw ConfigError(where + ": key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Key* k = find_key(section, key);
    if (!k)
      throw ConfigError(where + ": unknown key '" + key + "' in [" + section +
                        "]");
    k->set(cfg, value, where + " [" + section + "] " + key);
    seen.emplace_back(section, key);
  }

  bool scenario_given = false;
  for (const auto& [s, k] : seen)
    if (s == "run" && k == "scenario") scenario_given = true;
  if (!scenario_given)
    throw ConfigError("missing required key: [run] scenario");

  for (const auto& k : schema()) {
    bool given = false;
    for (const auto& [s, n] : seen)
      if (s == k.section && n == k.name) given = true;
    if (!given)
      cfg.defaulted.push_back("[" + k.section + "] " + k.name + " = " +
                              k.get(cfg) + " (default)");
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::serialize() const {
  std::string out;
  std::string section;
  for (const auto& k : schema()) {
    if (k.section != section) {
      if (!out.empty()) out += "\n";
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += k.name + " = " + k.get(*this) + "\n";
  }
  return out;
}

std::uint64_t RunConfig::digest() const { return fnv1a64(serialize()); }

std::string RunConfig::digest_hex() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest()));
  return buf;
}

namespace {

const Key* resolve_key(const std::string& key) {
  std::string section, name;
  std::size_t dot = key.find('.');
  if (dot != std::string::npos) {
    section = key.substr(0, dot);
    name = key.substr(dot + 1);
    const Key* k = find_key(section, name);
    if (!k) throw ConfigError("unknown key '" + key + "'");
    return k;
  }
  // bare key: must be unique across sections
  const Key* found = nullptr;
  for (const auto& k : schema()) {
    if (k.name == key) {
      if (found)
        throw ConfigError("ambiguous key '" + key + "', qualify as section.key");
      found = &k;
    }
  }
  if (!found) throw ConfigError("unknown key '" + key + "'");
  return found;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const Key* k = resolve_key(key);
  k->set(*this, value, "set " + k->section + "." + k->name);
}

std::string RunConfig::get(const std::string& key) const {
  return resolve_key(key)->get(*this);
}

void RunConfig::validate() const {
  material.validate();
  if (geometry.dx <= 0.0) throw ConfigError("[geometry] dx must be positive");
  if (geometry.m_ratio < 1.5)
    throw ConfigError("[geometry] m_ratio must be >= 1.5");
  if (geometry.thickness <= 0.0)
    throw ConfigError("[geometry] thickness must be positive");
  if (scenario == ScenarioKind::FrontCollapse) {
    if (geometry.R_over_t < 0.1 || geometry.R_over_t > 0.9)
      throw ConfigError("[geometry] R_over_t outside [0.1, 0.9]");
    for (double r : r_over_t_values) {
      if (r < 0.1 || r > 0.9)
        throw ConfigError("[run] R_over_t_values entry outside [0.1, 0.9]");
    }
    if (!(geometry.a > geometry.b) || !(geometry.b > 0.0))
      throw ConfigError("[geometry] requires a > b > 0");
    if (geometry.t <= 0.0) throw ConfigError("[geometry] t must be positive");
  } else {
    if (geometry.L <= 0.0 || geometry.h <= 0.0)
      throw ConfigError("[geometry] L and h must be positive");
    if (geometry.L < 5.0 * geometry.h)
      throw ConfigError("[geometry] footloose requires L >= 5h (beam regime)");
  }
  if (mode == RunMode::Erosion && scenario == ScenarioKind::FrontCollapse &&
      !support.enabled)
    throw ConfigError("[support] erosion mode requires enabled = true");
  if (support.v_e < 0.0) throw ConfigError("[support] v_e must be >= 0");
  if (support.k_s < 0.0) throw ConfigError("[support] k_s must be >= 0");
  if (gravity.g <= 0.0) throw ConfigError("[gravity] g must be positive");
  if (integrator.dt_safety <= 0.0 || integrator.dt_safety >= 1.0)
    throw ConfigError("[integrator] dt_safety must be in (0, 1)");
  if (integrator.relax_tol <= 0.0)
    throw ConfigError("[integrator] relax_tol must be positive");
  if (output.snapshot_every < 1 || output.probe_every < 1)
    throw ConfigError("[output] snapshot_every/probe_every must be >= 1");
}

}  // namespace gpd
