/// @file config.hpp
/// @brief Run configuration: flat `key = value` grammar with sections.
///
///   [problem]  name, nu, Re, Lx, Ly, lid_speed, T, steady_tol, max_steps, paper_scale
///   [grid]     Nx, Ny
///   [scheme]   scheme, tau | (tau_max, tau_min, eta), eps_den, eps_det
///   [output]   dir, snapshot_stride, snapshot_times
///
/// `#` and `;` start comments.  Overrides "section.key=value" take precedence
/// over the file, which takes precedence over defaults.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsstab/adaptive.hpp"

namespace nsstab {

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ConfigEntry {
  std::string value;
  std::string source;  ///< "flag", "config" or "default"
  int line = 0;
};

struct RunConfig {
  std::string problem = "taylor_green";
  std::optional<double> nu;
  std::optional<double> re;
  double lx = 1.0;
  double ly = 1.0;
  std::optional<double> lid_speed;
  std::optional<double> t_final;
  std::optional<double> steady_tol;
  long max_steps = 1000000;
  bool paper_scale = false;

  int nx = 64;
  int ny = 64;

  SchemeKind scheme = SchemeKind::CN2;
  std::optional<double> tau;
  std::optional<StepController> controller;
  Tolerances tol;

  std::filesystem::path out_dir = "out";
  long snapshot_stride = 0;
  std::vector<double> snapshot_times;

  /// Every recognised key with its effective value and where it came from.
  std::map<std::string, ConfigEntry> entries;
  std::vector<std::string> overrides;
};

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

ProblemSpec make_problem(const RunConfig& cfg);
GridSpec make_grid(const RunConfig& cfg, const ProblemSpec& problem);
/// Final time or steady-state criterion after applying problem defaults.
double effective_t_final(const RunConfig& cfg, const ProblemSpec& problem);
std::optional<SteadyStateCriterion> effective_steady(const RunConfig& cfg,
                                                     const ProblemSpec& problem);

}  // namespace nsstab
