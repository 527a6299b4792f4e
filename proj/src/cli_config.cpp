#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "singreg/cli.hpp"

namespace singreg::cli {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE || std::isnan(v))
    throw ConfigError(key + ": not a number: '" + raw + "'");
  return v;
}

long long to_int(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno == ERANGE) throw ConfigError(key + ": not an integer: '" + raw + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + raw + "'");
}

struct Binding {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

using Schema = std::map<std::string, std::map<std::string, Binding>>;

template <class T>
Binding make_binding(const std::string& name, T& ref) {
  if constexpr (std::is_same_v<T, double>) {
    return {[&ref, name](const std::string& s) { ref = to_double(name, s); }, [&ref] { return fmt(ref); }};
  } else if constexpr (std::is_same_v<T, bool>) {
    return {[&ref, name](const std::string& s) { ref = to_bool(name, s); },
            [&ref] { return std::string(ref ? "true" : "false"); }};
  } else if constexpr (std::is_same_v<T, int>) {
    return {[&ref, name](const std::string& s) {
              const long long v = to_int(name, s);
              if (v < -1000000000LL || v > 1000000000LL) throw ConfigError(name + ": out of range");
              ref = static_cast<int>(v);
            },
            [&ref] { return std::to_string(ref); }};
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    return {[&ref, name](const std::string& s) {
              const long long v = to_int(name, s);
              if (v < 0) throw ConfigError(name + ": must be non-negative");
              ref = static_cast<std::uint64_t>(v);
            },
            [&ref] { return std::to_string(ref); }};
  } else if constexpr (std::is_same_v<T, std::string>) {
    return {[&ref](const std::string& s) { ref = trim(s); }, [&ref] { return ref; }};
  } else {
    static_assert(std::is_same_v<T, std::vector<double>>);
    return {[&ref, name](const std::string& s) {
              ref.clear();
              std::stringstream ss(s);
              std::string item;
              while (std::getline(ss, item, ','))
                if (!trim(item).empty()) ref.push_back(to_double(name, item));
            },
            [&ref] {
              std::string out;
              for (std::size_t i = 0; i < ref.size(); ++i) out += (i ? ", " : "") + fmt(ref[i]);
              return out;
            }};
  }
}

#define SINGREG_BIND(section, obj, field) s[section][#field] = make_binding(std::string(section) + "." #field, obj.field)

Schema schema(RunConfig& c) {
  Schema s;
  s["run"]["experiment"] = make_binding("run.experiment", c.experiment);
  s["run"]["out"] = make_binding("run.out", c.out);
  s["run"]["override_guards"] = make_binding("run.override_guards", c.override_guards);
  s["run"]["seed"] = make_binding("run.seed", c.seed);
  s["schedule"]["eps"] = make_binding("schedule.eps", c.schedule);
  SINGREG_BIND("mollifier", c.mollifier, profile);
  SINGREG_BIND("mollifier", c.mollifier, scale);
  SINGREG_BIND("mollifier", c.mollifier, gamma);
  SINGREG_BIND("mollifier", c.mollifier, amplitude);
  SINGREG_BIND("frac", c.frac, alpha);
  SINGREG_BIND("frac", c.frac, T);
  SINGREG_BIND("frac", c.frac, h);
  auto& v = c.volterra;
  SINGREG_BIND("volterra", v, alpha);
  SINGREG_BIND("volterra", v, model);
  SINGREG_BIND("volterra", v, gamma);
  SINGREG_BIND("volterra", v, b);
  SINGREG_BIND("volterra", v, coefficient);
  SINGREG_BIND("volterra", v, free_term);
  SINGREG_BIND("volterra", v, free_value);
  SINGREG_BIND("volterra", v, free_position);
  SINGREG_BIND("volterra", v, X);
  SINGREG_BIND("volterra", v, points);
  SINGREG_BIND("volterra", v, eps);
  SINGREG_BIND("volterra", v, oracle);
  SINGREG_BIND("volterra", v, oracle_tol);
  SINGREG_BIND("volterra", v, shift_s);
  SINGREG_BIND("volterra", v, negative_control);
  auto& e = c.evolution;
  SINGREG_BIND("evolution", e, variant);
  SINGREG_BIND("evolution", e, dim);
  SINGREG_BIND("evolution", e, half_width);
  SINGREG_BIND("evolution", e, points);
  SINGREG_BIND("evolution", e, T);
  SINGREG_BIND("evolution", e, dt);
  SINGREG_BIND("evolution", e, data);
  SINGREG_BIND("evolution", e, model);
  SINGREG_BIND("evolution", e, gamma);
  SINGREG_BIND("evolution", e, b);
  SINGREG_BIND("evolution", e, coefficient);
  SINGREG_BIND("evolution", e, potential);
  SINGREG_BIND("evolution", e, potential_exponent);
  SINGREG_BIND("evolution", e, potential_strength);
  SINGREG_BIND("evolution", e, mollify_kernel);
  SINGREG_BIND("evolution", e, p);
  SINGREG_BIND("evolution", e, shift_s);
  SINGREG_BIND("evolution", e, csv_stride);
  auto& q = c.schrodinger;
  SINGREG_BIND("schrodinger", q, dim);
  SINGREG_BIND("schrodinger", q, half_width);
  SINGREG_BIND("schrodinger", q, points);
  SINGREG_BIND("schrodinger", q, T);
  SINGREG_BIND("schrodinger", q, dt);
  SINGREG_BIND("schrodinger", q, potential);
  SINGREG_BIND("schrodinger", q, potential_exponent);
  SINGREG_BIND("schrodinger", q, potential_strength);
  SINGREG_BIND("schrodinger", q, beta);
  SINGREG_BIND("schrodinger", q, t);
  SINGREG_BIND("sweep", c.sweep, dim);
  SINGREG_BIND("sweep", c.sweep, p);
  SINGREG_BIND("sweep", c.sweep, half_width);
  SINGREG_BIND("sweep", c.sweep, points);
  SINGREG_BIND("sweep", c.sweep, T);
  SINGREG_BIND("sweep", c.sweep, dt);
  return s;
}

#undef SINGREG_BIND

void one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  throw ConfigError(key + ": '" + v + "' is not one of " + list);
}

void positive(const std::string& key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + ": must be positive and finite");
}

void grid_points(const std::string& key, int n) {
  if (n < 8 || (n & (n - 1)) != 0) throw ConfigError(key + ": must be a power of two >= 8");
}

void validate(const RunConfig& c) {
  if (!c.experiment.empty())
    one_of("run.experiment", c.experiment, {"frac-bounds", "volterra", "evolution", "schrodinger", "sweep", "all"});
  if (c.schedule.empty()) throw ConfigError("schedule.eps: empty schedule");
  if (c.schedule.size() < 5) throw ConfigError("schedule.eps: at least 5 values required");
  for (std::size_t i = 0; i < c.schedule.size(); ++i) {
    if (!(c.schedule[i] > 0.0 && c.schedule[i] < std::exp(-1.0)))
      throw ConfigError("schedule.eps: values must lie in (0, 1/e)");
    if (i && !(c.schedule[i] < c.schedule[i - 1])) throw ConfigError("schedule.eps: values must strictly decrease");
  }
  one_of("mollifier.profile", c.mollifier.profile, {"bump", "moment-vanishing"});
  one_of("mollifier.scale", c.mollifier.scale, {"log", "loglog", "power"});
  positive("mollifier.gamma", c.mollifier.gamma);
  positive("mollifier.amplitude", c.mollifier.amplitude);
  if (!std::isfinite(c.frac.alpha)) throw ConfigError("frac.alpha: must be finite");
  positive("frac.T", c.frac.T);
  positive("frac.h", c.frac.h);
  const auto& v = c.volterra;
  one_of("volterra.model", v.model, {"zero", "linear", "power", "sqrt", "step", "quadratic", "extremal"});
  one_of("volterra.free_term", v.free_term, {"constant", "delta"});
  one_of("volterra.oracle", v.oracle, {"none", "free", "exp", "mittag-leffler"});
  if (v.oracle == "exp" && !(v.alpha == 1.0 && v.model == "linear" && v.free_term == "constant"))
    throw ConfigError("volterra.oracle: exp needs alpha = 1, a linear kernel and a constant free term");
  if (v.oracle == "mittag-leffler" && !(v.alpha == 0.5 && v.model == "linear" && v.free_term == "constant"))
    throw ConfigError("volterra.oracle: mittag-leffler needs alpha = 1/2, a linear kernel and a constant free term");
  if (v.oracle == "free" && v.model != "zero") throw ConfigError("volterra.oracle: free needs model = zero");
  if (!std::isfinite(v.alpha)) throw ConfigError("volterra.alpha: must be finite");
  if (!(v.gamma > 0.0 && v.gamma < 1.0)) throw ConfigError("volterra.gamma: must lie in (0,1)");
  positive("volterra.b", v.b);
  positive("volterra.X", v.X);
  grid_points("volterra.points", v.points);
  if (!(v.eps >= 0.0 && v.eps < std::exp(-1.0))) throw ConfigError("volterra.eps: must lie in [0, 1/e)");
  if (v.eps == 0.0 && !(v.alpha > 0.0)) throw ConfigError("volterra.eps: eps = 0 needs alpha > 0");
  if (v.eps == 0.0 && v.model == "extremal") throw ConfigError("volterra.eps: the extremal kernel needs eps > 0");
  if (v.eps == 0.0 && v.free_term == "delta") throw ConfigError("volterra.eps: a delta free term needs eps > 0");
  positive("volterra.oracle_tol", v.oracle_tol);
  positive("volterra.shift_s", v.shift_s);
  const auto& e = c.evolution;
  one_of("evolution.variant", e.variant, {"plain", "conservative", "potential"});
  one_of("evolution.data", e.data, {"gaussian", "delta"});
  one_of("evolution.model", e.model, {"none", "linear", "power", "sqrt", "step", "quadratic"});
  one_of("evolution.potential", e.potential, {"none", "delta", "gaussian"});
  if ((e.variant == "potential") != (e.potential != "none"))
    throw ConfigError("evolution.potential: the potential variant needs a potential and no other variant takes one");
  if (e.dim != 1 && e.dim != 2) throw ConfigError("evolution.dim: must be 1 or 2");
  positive("evolution.half_width", e.half_width);
  grid_points("evolution.points", e.points);
  positive("evolution.T", e.T);
  positive("evolution.dt", e.dt);
  if (!(e.gamma > 0.0 && e.gamma < 1.0)) throw ConfigError("evolution.gamma: must lie in (0,1)");
  positive("evolution.b", e.b);
  positive("evolution.potential_exponent", e.potential_exponent);
  if (!(e.p > 0.0)) throw ConfigError("evolution.p: must be positive");
  positive("evolution.shift_s", e.shift_s);
  if (e.csv_stride < 1) throw ConfigError("evolution.csv_stride: must be >= 1");
  const auto& q = c.schrodinger;
  if (q.dim != 1 && q.dim != 2) throw ConfigError("schrodinger.dim: must be 1 or 2");
  one_of("schrodinger.potential", q.potential, {"none", "delta", "gaussian"});
  positive("schrodinger.half_width", q.half_width);
  grid_points("schrodinger.points", q.points);
  positive("schrodinger.T", q.T);
  positive("schrodinger.dt", q.dt);
  positive("schrodinger.potential_exponent", q.potential_exponent);
  if (q.beta < 0) throw ConfigError("schrodinger.beta: must be >= 0");
  positive("schrodinger.t", q.t);
  if (c.sweep.dim != 1 && c.sweep.dim != 2) throw ConfigError("sweep.dim: must be 1 or 2");
  if (!(c.sweep.p >= 1.0)) throw ConfigError("sweep.p: must be >= 1");
  positive("sweep.half_width", c.sweep.half_width);
  grid_points("sweep.points", c.sweep.points);
  positive("sweep.T", c.sweep.T);
  positive("sweep.dt", c.sweep.dt);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RunConfig cfg;
  Schema s = schema(cfg);
  for (const auto& [section, body] : tree) {
    const auto sit = s.find(section);
    if (sit == s.end()) throw ConfigError("config: unknown section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      const auto kit = sit->second.find(key);
      if (kit == sit->second.end()) throw ConfigError("config: unknown key '" + section + "." + key + "'");
      kit->second.set(node.data());
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string write_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  Schema s = schema(copy);
  std::string out;
  for (const char* section : {"run", "schedule", "mollifier", "frac", "volterra", "evolution", "schrodinger", "sweep"}) {
    out += std::string("[") + section + "]\n";
    for (const auto& [key, b] : s[section]) out += key + " = " + b.get() + "\n";
    out += "\n";
  }
  return out;
}

}  // namespace singreg::cli
