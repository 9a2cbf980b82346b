#include "nsstab/adaptive.hpp"

#include <cmath>

namespace nsstab {

void StepController::validate() const {
  if (!(tau_min > 0.0) || !(tau_min <= tau_max) || !std::isfinite(tau_max)) {
    throw ValidationError("step controller needs 0 < tau_min <= tau_max");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ValidationError("step controller needs eta >= 0");
}

double next_tau(double e_n, double e_nm1, double tau_n, const StepController& ctrl) {
  if (!(tau_n > 0.0)) throw ValidationError("next_tau: tau_n must be positive");
  const double rate = (e_n - e_nm1) / tau_n;
  const double tau = ctrl.tau_max / std::sqrt(1.0 + ctrl.eta * rate * rate);
  return std::max(ctrl.tau_min, std::min(ctrl.tau_max, tau));
}

StepResult step_variable(const SimulationState& state, double tau_next,
                         const Integrator& integrator) {
  if (!is_variable_step(state.scheme)) {
    throw ValidationError("step_variable needs VCN2 or VBDF2, got " + to_string(state.scheme));
  }
  if (!state.Unm1) throw ValidationError("step_variable needs two history levels");
  return integrator.step(state, tau_next);
}

}  // namespace nsstab
