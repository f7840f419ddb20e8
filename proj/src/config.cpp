#include "rps/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "rps/error.hpp"
#include "rps/io.hpp"

namespace rps {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError("'" + v + "' is not a number");
  return out;
}

long long to_int(const std::string& v) {
  long long out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError("'" + v + "' is not an integer");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + v + "' is not a boolean");
}

template <class E>
E to_enum(const std::string& v, std::initializer_list<std::pair<const char*, E>> names) {
  for (const auto& [name, value] : names) {
    if (v == name) return value;
  }
  std::string list;
  for (const auto& [name, value] : names) list += std::string(list.empty() ? "" : "|") + name;
  throw ConfigError("'" + v + "' is not one of " + list);
}

template <class E>
std::string enum_name(E v, std::initializer_list<std::pair<const char*, E>> names) {
  for (const auto& [name, value] : names) {
    if (v == value) return name;
  }
  return "?";
}

const std::initializer_list<std::pair<const char*, InitKind>> kInitKinds = {
    {"square", InitKind::square}, {"exponential", InitKind::exponential}, {"atoms", InitKind::atoms},
    {"csv", InitKind::csv}};
const std::initializer_list<std::pair<const char*, QuadratureRule>> kRules = {
    {"midpoint", QuadratureRule::midpoint}, {"simpson", QuadratureRule::simpson}};
const std::initializer_list<std::pair<const char*, ThetaRule>> kThetaRules = {
    {"left", ThetaRule::left}, {"trapezoid", ThetaRule::trapezoid}};
const std::initializer_list<std::pair<const char*, SignVariant>> kVariants = {
    {"consistent", SignVariant::consistent}, {"as_typed", SignVariant::as_typed}};
const std::initializer_list<std::pair<const char*, FlatWeight>> kWeights = {{"V", FlatWeight::V},
                                                                           {"unit", FlatWeight::unit}};
const std::initializer_list<std::pair<const char*, BLConvention>> kConventions = {{"max", BLConvention::max},
                                                                                 {"sum", BLConvention::sum}};

std::string format_atoms(const std::vector<Atom>& atoms) {
  std::string s;
  for (const Atom& a : atoms) {
    if (!s.empty()) s += ", ";
    s += format_number(a.location) + ":" + format_number(a.weight);
  }
  return s;
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define RPS_REAL(KEY, MEMBER)                                                  \
  Field {                                                                      \
    KEY, [](ExperimentConfig& c, const std::string& v) { c.MEMBER = to_double(v); }, \
        [](const ExperimentConfig& c) { return format_number(c.MEMBER); }      \
  }
#define RPS_INT(KEY, MEMBER, TYPE)                                                         \
  Field {                                                                                  \
    KEY, [](ExperimentConfig& c, const std::string& v) { c.MEMBER = static_cast<TYPE>(to_int(v)); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.MEMBER); }                 \
  }
#define RPS_ENUM(KEY, MEMBER, TABLE)                                                      \
  Field {                                                                                 \
    KEY, [](ExperimentConfig& c, const std::string& v) { c.MEMBER = to_enum(v, TABLE); }, \
        [](const ExperimentConfig& c) { return enum_name(c.MEMBER, TABLE); }              \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      RPS_REAL("model.eta", model.eta),
      RPS_REAL("model.h", model.h),
      RPS_INT("grid.m", grid.m, int),
      RPS_INT("grid.K", grid.K, int),
      RPS_REAL("solver.dt0", solver.dt0),
      RPS_REAL("solver.theta_max", solver.theta_max),
      RPS_REAL("solver.t_end", solver.t_end),
      RPS_REAL("solver.stop_frac", solver.stop_frac),
      RPS_INT("solver.snapshot_every", solver.snapshot_every, int),
      Field{"solver.early_stop", [](ExperimentConfig& c, const std::string& v) { c.solver.early_stop = to_bool(v); },
            [](const ExperimentConfig& c) { return std::string(c.solver.early_stop ? "true" : "false"); }},
      RPS_ENUM("solver.theta_rule", solver.theta_rule, kThetaRules),
      RPS_ENUM("init.kind", init.kind, kInitKinds),
      RPS_INT("init.k0", init.k0, int),
      RPS_REAL("init.alpha", init.alpha),
      Field{"init.atoms", [](ExperimentConfig& c, const std::string& v) { c.init.atoms = parse_atoms(v); },
            [](const ExperimentConfig& c) { return format_atoms(c.init.atoms); }},
      Field{"init.path", [](ExperimentConfig& c, const std::string& v) { c.init.path = v; },
            [](const ExperimentConfig& c) { return c.init.path; }},
      RPS_ENUM("init.rule", init.rule, kRules),
      RPS_REAL("harris.sigma", harris.inputs.sigma),
      RPS_REAL("harris.A_level", harris.inputs.A_level),
      RPS_REAL("harris.C_V", harris.inputs.C_V),
      RPS_REAL("harris.omega_V", harris.inputs.omega_V),
      RPS_ENUM("harris.variant", harris.inputs.sign_variant, kVariants),
      RPS_REAL("harris.t_min", harris.t_min),
      RPS_REAL("harris.t_max", harris.t_max),
      RPS_INT("harris.t_points", harris.t_points, int),
      RPS_INT("mc.n", mc.n, std::size_t),
      RPS_INT("mc.replicates", mc.replicates, int),
      RPS_INT("mc.seed", mc.seed, std::uint64_t),
      RPS_REAL("mc.t_end", mc.t_end),
      RPS_INT("mc.m", mc.m, int),
      RPS_REAL("mc.pde_dt0", mc.pde_dt0),
      RPS_ENUM("flatnorm.weight", flat.weight, kWeights),
      RPS_ENUM("flatnorm.convention", flat.convention, kConventions),
      Field{"flatnorm.atoms", [](ExperimentConfig& c, const std::string& v) { c.flat_atoms = parse_atoms(v); },
            [](const ExperimentConfig& c) { return format_atoms(c.flat_atoms); }},
      Field{"output.dir", [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; },
            [](const ExperimentConfig& c) { return c.output_dir; }},
  };
  return table;
}

#undef RPS_REAL
#undef RPS_INT
#undef RPS_ENUM

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Atom> parse_atoms(const std::string& text) {
  std::vector<Atom> atoms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("atom '" + item + "' must be written location:weight");
    const double x = to_double(trim(item.substr(0, colon)));
    const double w = to_double(trim(item.substr(colon + 1)));
    if (!(x >= 0.0) || !std::isfinite(w)) throw ConfigError("atom '" + item + "' needs location >= 0 and finite weight");
    atoms.push_back({x, w});
  }
  return atoms;
}

void ExperimentConfig::validate() const {
  model.validate();
  grid.validate();
  solver.validate();
  if (init.kind == InitKind::square && (init.k0 < 0 || init.k0 > grid.K)) {
    throw ConfigError("init.k0 must lie in [0, grid.K]");
  }
  if (init.kind == InitKind::exponential && !(init.alpha > 0.0)) throw ConfigError("init.alpha must be > 0");
  if (init.kind == InitKind::atoms && init.atoms.empty()) throw ConfigError("init.kind = atoms needs init.atoms");
  if (init.kind == InitKind::csv && init.path.empty()) throw ConfigError("init.kind = csv needs init.path");
  HarrisInputs probe = harris.inputs;
  probe.T = harris.t_min;
  probe.validate();
  if (!(harris.t_max >= harris.t_min)) throw ConfigError("harris.t_max must be >= harris.t_min");
  if (harris.t_points < 1) throw ConfigError("harris.t_points must be >= 1");
  if (mc.n < 2) throw ConfigError("mc.n must be >= 2");
  if (mc.replicates < 1) throw ConfigError("mc.replicates must be >= 1");
  if (!(mc.t_end >= 0.0)) throw ConfigError("mc.t_end must be >= 0");
  if (mc.m < 1 || grid.m % mc.m != 0) throw ConfigError("mc.m must divide grid.m");
  if (!(mc.pde_dt0 > 0.0)) throw ConfigError("mc.pde_dt0 must be > 0");
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.key; });
    if (it == table.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      it->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
  cfg.grid.h = cfg.model.h;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ConfigEntries resolved_entries(const ExperimentConfig& cfg) {
  ConfigEntries out;
  for (const Field& f : fields()) out.emplace_back(f.key, f.get(cfg));
  return out;
}

GridMeasure build_initial(const ExperimentConfig& cfg) {
  switch (cfg.init.kind) {
    case InitKind::square:
      return ingest_density(SquareDensity{cfg.init.k0}, cfg.grid, cfg.init.rule);
    case InitKind::exponential:
      return ingest_density(ExponentialDensity{cfg.init.alpha}, cfg.grid, cfg.init.rule);
    case InitKind::atoms:
      return bin_atoms(AtomicMeasure(cfg.init.atoms), cfg.grid);
    case InitKind::csv: {
      const InitFile file = read_init_csv(cfg.init.path);
      if (file.measure) {
        if (!(file.measure->spec() == cfg.grid)) throw ConfigError("grid in '" + cfg.init.path + "' differs from config grid");
        return *file.measure;
      }
      return ingest_density(*file.density, cfg.grid, cfg.init.rule);
    }
  }
  throw ConfigError("unknown init.kind");
}

}  // namespace rps
