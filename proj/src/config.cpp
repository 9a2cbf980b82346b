#include "nsstab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nsstab {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"problem", {"name", "nu", "Re", "Lx", "Ly", "lid_speed", "T", "steady_tol", "max_steps", "paper_scale"}},
      {"grid", {"Nx", "Ny"}},
      {"scheme", {"scheme", "tau", "tau_max", "tau_min", "eta", "eps_den", "eps_det"}},
      {"output", {"dir", "snapshot_stride", "snapshot_times"}},
  };
  return keys;
}

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

void check_key(const std::string& section, const std::string& key, const std::string& where) {
  auto it = known_keys().find(section);
  if (it == known_keys().end()) throw ConfigError(where + ": unknown section [" + section + "]");
  if (!it->second.count(key)) throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
}

std::string where(const ConfigEntry& e, const std::string& key) {
  if (e.source == "flag") return "--set " + key;
  return "line " + std::to_string(e.line);
}

double to_double(const std::string& key, const ConfigEntry& e) {
  const std::string& s = e.value;
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  // allow simple fractions such as 1/120
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const ConfigEntry num{trim(s.substr(0, slash)), e.source, e.line};
    const ConfigEntry den{trim(s.substr(slash + 1)), e.source, e.line};
    const double d = to_double(key, den);
    if (d == 0.0) throw ConfigError(where(e, key) + ": " + key + " divides by zero");
    return to_double(key, num) / d;
  }
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError(where(e, key) + ": " + key + " = '" + s + "' is not a finite number");
  }
  return v;
}

long to_long(const std::string& key, const ConfigEntry& e) {
  long v = 0;
  const auto* last = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(where(e, key) + ": " + key + " = '" + e.value + "' is not an integer");
  }
  return v;
}

bool to_bool(const std::string& key, const ConfigEntry& e) {
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(where(e, key) + ": " + key + " = '" + e.value + "' is not a boolean");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  std::map<std::string, ConfigEntry> entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string at = "line " + std::to_string(line_no);
    std::string line = raw;
    if (const auto pos = line.find_first_of("#;"); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(at + ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_keys().count(section)) throw ConfigError(at + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(at + ": expected 'key = value', got '" + line + "'");
    if (section.empty()) throw ConfigError(at + ": key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    check_key(section, key, at);
    if (value.empty()) throw ConfigError(at + ": empty value for '" + key + "'");
    const std::string full = section + "." + key;
    if (entries.count(full)) {
      throw ConfigError(at + ": duplicate key '" + full + "' (first set on line " +
                        std::to_string(entries[full].line) + ")");
    }
    entries[full] = {value, "config", line_no};
  }

  RunConfig cfg;
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError("--set " + o + ": expected section.key=value");
    }
    const std::string sec = trim(o.substr(0, dot));
    const std::string key = trim(o.substr(dot + 1, eq - dot - 1));
    const std::string value = trim(o.substr(eq + 1));
    check_key(sec, key, "--set " + o);
    entries[sec + "." + key] = {value, "flag", 0};
    cfg.overrides.push_back(sec + "." + key + "=" + value);
  }

  auto get = [&](const std::string& k) -> const ConfigEntry* {
    auto it = entries.find(k);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string& k) -> std::optional<double> {
    const ConfigEntry* e = get(k);
    if (!e) return std::nullopt;
    return to_double(k, *e);
  };

  if (const auto* e = get("problem.name")) cfg.problem = e->value;
  cfg.nu = num("problem.nu");
  cfg.re = num("problem.Re");
  if (auto v = num("problem.Lx")) cfg.lx = *v;
  if (auto v = num("problem.Ly")) cfg.ly = *v;
  cfg.lid_speed = num("problem.lid_speed");
  cfg.t_final = num("problem.T");
  cfg.steady_tol = num("problem.steady_tol");
  if (const auto* e = get("problem.max_steps")) cfg.max_steps = to_long("problem.max_steps", *e);
  if (const auto* e = get("problem.paper_scale")) cfg.paper_scale = to_bool("problem.paper_scale", *e);
  if (const auto* e = get("grid.Nx")) cfg.nx = static_cast<int>(to_long("grid.Nx", *e));
  if (const auto* e = get("grid.Ny")) cfg.ny = static_cast<int>(to_long("grid.Ny", *e));
  if (const auto* e = get("scheme.scheme")) {
    try {
      cfg.scheme = scheme_from_string(e->value);
    } catch (const ValidationError& err) {
      throw ConfigError(where(*e, "scheme.scheme") + ": " + err.what());
    }
  }
  cfg.tau = num("scheme.tau");
  const auto tau_max = num("scheme.tau_max");
  const auto tau_min = num("scheme.tau_min");
  const auto eta = num("scheme.eta");
  if (auto v = num("scheme.eps_den")) cfg.tol.eps_den = *v;
  if (auto v = num("scheme.eps_det")) cfg.tol.eps_det_scale = *v;
  if (const auto* e = get("output.dir")) cfg.out_dir = e->value;
  if (const auto* e = get("output.snapshot_stride")) cfg.snapshot_stride = to_long("output.snapshot_stride", *e);
  if (const auto* e = get("output.snapshot_times")) {
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      cfg.snapshot_times.push_back(to_double("output.snapshot_times", {trim(item), e->source, e->line}));
    }
    std::sort(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
  }

  // semantic checks
  auto conflict = [&](const std::string& a, const std::string& b, const std::string& why) {
    throw ConfigError(a + " (" + where(*get(a), a) + ") conflicts with " + b + " (" +
                      where(*get(b), b) + "): " + why);
  };
  const bool has_ctrl = tau_max || tau_min || eta;
  if (cfg.tau && has_ctrl) {
    conflict("scheme.tau", tau_max ? "scheme.tau_max" : tau_min ? "scheme.tau_min" : "scheme.eta",
             "give either a fixed step or a controller");
  }
  if (has_ctrl) {
    if (!tau_max || !tau_min || !eta) {
      throw ConfigError("controller needs all of scheme.tau_max, scheme.tau_min and scheme.eta");
    }
    cfg.controller = StepController{*tau_max, *tau_min, *eta};
    try {
      cfg.controller->validate();
    } catch (const ValidationError& err) {
      throw ConfigError(err.what());
    }
  }
  if (!cfg.tau && !cfg.controller) {
    throw ConfigError("one of scheme.tau or the controller (scheme.tau_max, tau_min, eta) is required");
  }
  if (cfg.tau && !(*cfg.tau > 0.0)) throw ConfigError("scheme.tau must be positive");
  if (is_variable_step(cfg.scheme) && !cfg.controller) {
    throw ConfigError("scheme." + to_string(cfg.scheme) + " needs a step controller (tau_max, tau_min, eta)");
  }
  if (!is_variable_step(cfg.scheme) && cfg.controller) {
    throw ConfigError("the controller needs a variable-step scheme (vcn2 or vbdf2), got " + to_string(cfg.scheme));
  }
  if (cfg.t_final && cfg.steady_tol) {
    conflict("problem.T", "problem.steady_tol", "give either a final time or a steady-state tolerance");
  }
  if (cfg.t_final && !(*cfg.t_final > 0.0)) throw ConfigError("problem.T must be positive");
  if (cfg.steady_tol && !(*cfg.steady_tol > 0.0)) throw ConfigError("problem.steady_tol must be positive");
  if (cfg.nu && cfg.re) conflict("problem.nu", "problem.Re", "give the viscosity once");
  if (cfg.max_steps <= 0) throw ConfigError("problem.max_steps must be positive");
  if (cfg.snapshot_stride < 0) throw ConfigError("output.snapshot_stride must be >= 0");
  if (cfg.tol.eps_det_scale <= 0.0) throw ConfigError("scheme.eps_det must be positive");

  // record effective values with their source
  cfg.entries = entries;
  auto dflt = [&](const std::string& k, const std::string& v) {
    if (!cfg.entries.count(k)) cfg.entries[k] = {v, "default", 0};
  };
  dflt("problem.name", cfg.problem);
  dflt("problem.Lx", "1");
  dflt("problem.Ly", "1");
  dflt("problem.max_steps", std::to_string(cfg.max_steps));
  dflt("problem.paper_scale", "false");
  dflt("grid.Nx", std::to_string(cfg.nx));
  dflt("grid.Ny", std::to_string(cfg.ny));
  dflt("scheme.scheme", to_string(cfg.scheme));
  dflt("scheme.eps_den", "1e-14*Lx*Ly");
  dflt("scheme.eps_det", "1e-12");
  dflt("output.dir", cfg.out_dir.string());
  dflt("output.snapshot_stride", "0");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), overrides);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ProblemSpec make_problem(const RunConfig& cfg) {
  ProblemSpec p;
  try {
    std::optional<double> param;
    if (cfg.problem == "cavity" || cfg.problem == "lid_driven_cavity") {
      if (cfg.re) param = *cfg.re;
      if (cfg.nu) param = 1.0 / *cfg.nu;
    } else {
      if (cfg.re) throw ConfigError("problem.Re applies only to the cavity problem");
      param = cfg.nu;
    }
    p = problem_by_name(cfg.problem, param, cfg.paper_scale);
    if (cfg.nu && p.name == "kelvin_helmholtz") p.nu = *cfg.nu;
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  p.lx = cfg.lx;
  p.ly = cfg.ly;
  if (cfg.lid_speed) {
    if (p.bc.type != BoundaryType::DirichletXY) {
      throw ConfigError("problem.lid_speed applies only to the cavity problem");
    }
    p.bc.lid_speed = *cfg.lid_speed;
  }
  if (cfg.t_final) {
    p.t_final = *cfg.t_final;
    p.steady.reset();
  }
  if (cfg.steady_tol) p.steady = SteadyStateCriterion{*cfg.steady_tol, cfg.max_steps};
  if (p.steady) p.steady->max_steps = cfg.max_steps;
  return p;
}

GridSpec make_grid(const RunConfig& cfg, const ProblemSpec& problem) {
  try {
    return problem_grid(problem, cfg.nx, cfg.ny);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

double effective_t_final(const RunConfig& cfg, const ProblemSpec& problem) {
  return cfg.t_final.value_or(problem.t_final);
}

std::optional<SteadyStateCriterion> effective_steady(const RunConfig&, const ProblemSpec& problem) {
  return problem.steady;
}

}  // namespace nsstab
