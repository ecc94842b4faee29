#include "qbgk/config_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "qbgk/errors.hpp"

namespace qbgk {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("expected a number, got '" + t + "'");
  }
  return v;
}

template <class I>
I to_integer(const std::string& s) {
  const std::string t = trim(s);
  I v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("expected an integer, got '" + t + "'");
  }
  return v;
}

bool to_bool(const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("expected a boolean, got '" + t + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

// Up to N entries; missing trailing entries keep their value.
template <class T, std::size_t N, class Conv>
void parse_list(std::array<T, N>& dst, const std::string& s, Conv conv) {
  const std::vector<std::string> items = split_list(s);
  if (items.empty() || items.size() > N) {
    throw ConfigError("expected 1 to " + std::to_string(N) + " comma-separated values");
  }
  for (std::size_t i = 0; i < items.size(); ++i) dst[i] = conv(items[i]);
}

template <class T, std::size_t N, class Conv>
std::string join_list(const std::array<T, N>& src, Conv conv) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) out += (i ? "," : "") + conv(src[i]);
  return out;
}

template <class E>
E parse_enum(const std::string& s, std::initializer_list<E> all) {
  const std::string t = trim(s);
  for (E e : all) {
    if (t == to_string(e)) return e;
  }
  std::string opts;
  for (E e : all) opts += std::string(opts.empty() ? "" : ", ") + to_string(e);
  throw ConfigError("unknown value '" + t + "' (expected one of: " + opts + ")");
}

struct Field {
  std::string key;
  std::function<std::string(const SimulationConfig&)> get;
  std::function<void(SimulationConfig&, const std::string&)> set;
};

#define QBGK_DOUBLE(name, member)                                              \
  Field {                                                                      \
    name, [](const SimulationConfig& c) { return fmt(c.member); },             \
        [](SimulationConfig& c, const std::string& v) { c.member = to_double(v); } \
  }
#define QBGK_INT(name, member, type)                                                  \
  Field {                                                                             \
    name, [](const SimulationConfig& c) { return std::to_string(c.member); },         \
        [](SimulationConfig& c, const std::string& v) { c.member = to_integer<type>(v); } \
  }
#define QBGK_DLIST(name, member)                                                        \
  Field {                                                                               \
    name, [](const SimulationConfig& c) { return join_list(c.member, fmt); },           \
        [](SimulationConfig& c, const std::string& v) { parse_list(c.member, v, to_double); } \
  }
#define QBGK_ILIST(name, member)                                                           \
  Field {                                                                                  \
    name,                                                                                  \
        [](const SimulationConfig& c) {                                                    \
          return join_list(c.member, [](int x) { return std::to_string(x); });             \
        },                                                                                 \
        [](SimulationConfig& c, const std::string& v) { parse_list(c.member, v, to_integer<int>); } \
  }

const char* kFaceNames[4] = {"x_lo", "x_hi", "y_lo", "y_hi"};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> t = {
        {"scenario", [](const SimulationConfig& c) { return c.scenario; },
         [](SimulationConfig& c, const std::string& v) { c.scenario = trim(v); }},
        QBGK_INT("dv", dv, int),
        QBGK_INT("dx", dx, int),
        QBGK_DOUBLE("theta0", theta0),
        {"knudsen", [](const SimulationConfig& c) { return std::string(to_string(c.knudsen_profile)); },
         [](SimulationConfig& c, const std::string& v) {
           c.knudsen_profile = parse_enum(v, {KnudsenProfile::Constant, KnudsenProfile::Mixing});
         }},
        QBGK_DOUBLE("epsilon", epsilon),
        QBGK_INT("order", order, int),
        QBGK_DLIST("center_velocity", center_velocity),
        QBGK_DOUBLE("center_temperature", center_temperature),
        QBGK_DOUBLE("cfl", cfl),
        {"scheme", [](const SimulationConfig& c) { return std::string(to_string(c.scheme)); },
         [](SimulationConfig& c, const std::string& v) {
           c.scheme = parse_enum(v, {TimeScheme::Imex1, TimeScheme::Imex2});
         }},
        {"reconstruction",
         [](const SimulationConfig& c) { return std::string(to_string(c.reconstruction)); },
         [](SimulationConfig& c, const std::string& v) {
           c.reconstruction = parse_enum(
               v, {Reconstruction::None, Reconstruction::Minmod, Reconstruction::Weno5});
         }},
        QBGK_DOUBLE("t_end", t_end),
        QBGK_DOUBLE("output_interval", output_interval),
        QBGK_DOUBLE("dt", fixed_dt),
        QBGK_INT("max_steps", max_steps, std::int64_t),
        QBGK_DOUBLE("steady_tolerance", steady_tolerance),
        QBGK_ILIST("cells", cells),
        QBGK_DLIST("lower", lower),
        QBGK_DLIST("upper", upper),
        {"initial", [](const SimulationConfig& c) { return std::string(to_string(c.initial.kind)); },
         [](SimulationConfig& c, const std::string& v) {
           c.initial.kind =
               parse_enum(v, {InitialKind::Sine, InitialKind::Riemann, InitialKind::Uniform});
         }},
        QBGK_DOUBLE("rho_mean", initial.rho_mean),
        QBGK_DOUBLE("rho_amp", initial.rho_amp),
        QBGK_DOUBLE("t_mean", initial.t_mean),
        QBGK_DOUBLE("t_amp", initial.t_amp),
        QBGK_DOUBLE("rho_left", initial.rho_left),
        QBGK_DOUBLE("t_left", initial.t_left),
        QBGK_DOUBLE("rho_right", initial.rho_right),
        QBGK_DOUBLE("t_right", initial.t_right),
        QBGK_DOUBLE("split", initial.split),
        QBGK_DLIST("initial_velocity", initial.velocity),
        {"warm_start", [](const SimulationConfig& c) { return std::string(c.warm_start ? "true" : "false"); },
         [](SimulationConfig& c, const std::string& v) { c.warm_start = to_bool(v); }},
        QBGK_INT("integration_order", integration_order, int),
        QBGK_INT("seed", seed, std::uint64_t),
        QBGK_DOUBLE("source_min", source_min),
        QBGK_DOUBLE("source_max", source_max),
        QBGK_DLIST("dvm_bound", dvm_bound),
        QBGK_ILIST("dvm_points", dvm_points),
        QBGK_INT("threads", threads, int),
    };
    for (int f = 0; f < 4; ++f) {
      const std::string face = kFaceNames[f];
      t.push_back({"boundary_" + face,
                   [f](const SimulationConfig& c) { return std::string(to_string(c.boundary[f].kind)); },
                   [f](SimulationConfig& c, const std::string& v) {
                     c.boundary[f].kind = parse_enum(
                         v, {BoundaryKind::Periodic, BoundaryKind::Outflow, BoundaryKind::Wall});
                   }});
      t.push_back({"wall_velocity_" + face,
                   [f](const SimulationConfig& c) { return join_list(c.boundary[f].wall_velocity, fmt); },
                   [f](SimulationConfig& c, const std::string& v) {
                     parse_list(c.boundary[f].wall_velocity, v, to_double);
                   }});
      t.push_back({"wall_temperature_" + face,
                   [f](const SimulationConfig& c) { return fmt(c.boundary[f].wall_temperature); },
                   [f](SimulationConfig& c, const std::string& v) {
                     c.boundary[f].wall_temperature = to_double(v);
                   }});
    }
    return t;
  }();
  return table;
}

#undef QBGK_DOUBLE
#undef QBGK_INT
#undef QBGK_DLIST
#undef QBGK_ILIST

const Field* find_field(const std::string& key) {
  for (const Field& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

void set_periodic(SimulationConfig& c) {
  for (BoundarySpec& b : c.boundary) b = BoundarySpec{};
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"ap_periodic", "sod",          "mixing",
                                                 "cavity",      "newton_bench", "polylog_bench"};
  return names;
}

SimulationConfig preset_config(const std::string& scenario) {
  SimulationConfig c;
  c.scenario = scenario;
  set_periodic(c);
  if (scenario == "custom") return c;
  if (scenario == "ap_periodic") {
    c.dv = 3;
    c.theta0 = 9.0;
    c.epsilon = 1.0;
    c.order = 10;
    c.center_temperature = 0.75;
    c.cfl = 0.2;
    c.scheme = TimeScheme::Imex1;
    c.reconstruction = Reconstruction::None;
    c.t_end = 0.1;
    c.cells = {64, 1};
    c.initial.kind = InitialKind::Sine;
    c.initial.rho_mean = 2.0 / 3.0;
    c.initial.rho_amp = 1.0 / 3.0;
    c.initial.t_mean = 0.75;
    c.initial.t_amp = 0.25;
  } else if (scenario == "sod") {
    c.dv = 2;
    c.theta0 = 9.0;
    c.epsilon = 0.01;
    c.order = 15;
    c.cfl = 0.3;
    c.scheme = TimeScheme::Imex2;
    c.reconstruction = Reconstruction::Minmod;
    c.t_end = 0.2;
    c.cells = {256, 1};
    c.initial.kind = InitialKind::Riemann;
    c.boundary[kXLo].kind = BoundaryKind::Outflow;
    c.boundary[kXHi].kind = BoundaryKind::Outflow;
  } else if (scenario == "mixing") {
    c.dv = 3;
    c.theta0 = 4.0;
    c.knudsen_profile = KnudsenProfile::Mixing;
    c.epsilon = 0.001;
    c.order = 10;
    c.cfl = 0.3;
    c.scheme = TimeScheme::Imex2;
    c.reconstruction = Reconstruction::Weno5;
    c.t_end = 0.1;
    c.cells = {256, 1};
    c.initial.kind = InitialKind::Sine;
    c.initial.rho_mean = 1.0;
    c.initial.rho_amp = 0.5;
    c.initial.t_mean = 1.0;
    c.initial.t_amp = 0.25;
  } else if (scenario == "cavity") {
    c.dv = 3;
    c.dx = 2;
    c.theta0 = 4.0;
    c.epsilon = 0.1;
    c.order = 5;
    c.cfl = 0.2;
    c.scheme = TimeScheme::Imex1;
    c.reconstruction = Reconstruction::Minmod;
    c.t_end = 200.0;
    c.steady_tolerance = 1e-6;
    c.cells = {20, 20};
    c.initial.kind = InitialKind::Uniform;
    for (BoundarySpec& b : c.boundary) {
      b.kind = BoundaryKind::Wall;
      b.wall_temperature = 1.0;
    }
    c.boundary[kYHi].wall_velocity = {0.5, 0.0, 0.0};
  } else if (scenario == "newton_bench") {
    c.dv = 3;
    c.theta0 = 9.0;
    c.epsilon = 1.0;
    c.order = 10;
    c.fixed_dt = 0.001;
    c.t_end = 0.1;
    c.cells = {1, 1};
    c.initial.kind = InitialKind::Uniform;
  } else if (scenario == "polylog_bench") {
    c.cells = {1, 1};
  } else {
    throw ConfigError("scenario: unknown preset '" + scenario + "'");
  }
  return c;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.push_back(f.key);
  return keys;
}

std::map<std::string, std::string> config_entries(const SimulationConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const Field& f : fields()) out[f.key] = f.get(cfg);
  return out;
}

void apply_override(SimulationConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' lacks '='");
  const std::string key = trim(assignment.substr(0, eq));
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown key '" + key + "'");
  try {
    f->set(cfg, assignment.substr(eq + 1));
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

SimulationConfig parse_config_text(const std::string& text, const std::string& source) {
  struct Entry {
    int line;
    std::string key, value;
  };
  std::vector<Entry> entries;
  std::string scenario = "custom";
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!find_field(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (key == "scenario") scenario = value;
    entries.push_back({lineno, key, value});
  }
  SimulationConfig cfg;
  try {
    cfg = preset_config(scenario);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  for (const Entry& e : entries) {
    try {
      find_field(e.key)->set(cfg, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(source + ":" + std::to_string(e.line) + ": " + e.key + ": " + err.what());
    }
  }
  cfg.validate();
  return cfg;
}

SimulationConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string serialize_config(const SimulationConfig& cfg) {
  std::ostringstream os;
  for (const Field& f : fields()) os << f.key << " = " << f.get(cfg) << "\n";
  return os.str();
}

}  // namespace qbgk
