/// @file runner.hpp
/// @brief Simulation orchestration and temporal convergence sweeps.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nsstab/config.hpp"
#include "nsstab/io.hpp"

namespace nsstab {

std::string version_string();

struct RunArtifacts {
  std::filesystem::path dir;
  std::filesystem::path timeseries;
  std::filesystem::path manifest;
  std::vector<std::filesystem::path> snapshots;

  bool ok = false;
  std::string error;
  long steps = 0;
  double t_final = 0.0;
  double wall_seconds = 0.0;
  double div_inf_max = 0.0;
  double min_abs_det_A = 0.0;
  double max_identity_residual = 0.0;
  bool energy_non_increasing = true;
  bool steady_reached = false;
  /// Largest E_{n+1} - E_n (E_hat for BDF2 / VBDF2); <= 0 when monotone.
  double max_energy_increase = 0.0;
  SimulationState final_state;
  /// Plans built during the run (step-size changes reuse cached ones).
  long plan_builds = 0;
};

/// Runs one configuration, writing timeseries.csv, snapshots and
/// manifest.json into cfg.out_dir.  Solver failures are reported through
/// ok/error and a FAILED manifest; configuration errors throw ConfigError.
RunArtifacts run_simulation(const RunConfig& cfg);

struct ConvergenceRow {
  double tau = 0.0;
  ErrorNorms err;
  std::optional<double> order_u;
  std::optional<double> order_p;
};

/// One run per tau (in cfg.out_dir/tau_<k>), errors at the final time against
/// the exact solution, and convergence.csv with observed orders.
std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg, std::vector<double> taus);

/// Thread budget for sweeps: NSSTAB_THREADS if set, else the hardware count.
int sweep_threads();

}  // namespace nsstab
