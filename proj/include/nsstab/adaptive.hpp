/// @file adaptive.hpp
/// @brief Energy-based step-size controller for VCN2 / VBDF2.
#pragma once

#include "nsstab/schemes.hpp"

namespace nsstab {

struct StepController {
  double tau_max = 0.1;
  double tau_min = 1.0 / 120.0;
  double eta = 4e5;

  void validate() const;
};

/// max(tau_min, tau_max / sqrt(1 + eta ((E_n - E_{n-1}) / tau_n)^2))
double next_tau(double e_n, double e_nm1, double tau_n, const StepController& ctrl);

struct VariableHistory {
  double tau_n = 0.0;
  double tau_nm1 = 0.0;

  double ratio() const { return tau_n / tau_nm1; }
};

/// One variable step of size tau_next; the state must already carry two levels.
StepResult step_variable(const SimulationState& state, double tau_next,
                         const Integrator& integrator);

}  // namespace nsstab
