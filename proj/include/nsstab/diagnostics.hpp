/// @file diagnostics.hpp
/// @brief Energies, energy-law residuals, error norms, vorticity, observed orders.
#pragma once

#include <optional>
#include <vector>

#include "nsstab/schemes.hpp"

namespace nsstab {

/// E_h = 1/2 ||U||_h^2
double kinetic_energy(const VelocityField& u, const GridSpec& grid);
/// 1/4 (||U^n||_h^2 + ||2U^n - U^{n-1}||_h^2)
double bdf2_energy(const VelocityField& un, const VelocityField& unm1, const GridSpec& grid);
/// nu (Delta_h U, U)_h
double dissipation(const VelocityField& u, const StencilBank& bank, double nu);
double divergence_inf(const VelocityField& u, const StencilBank& bank);

/// |LHS - RHS| of the energy law of the scheme that produced `after` from
/// `before`, divided by max(1, e0).  CN1/CN2/VCN2 use the CN law, BDF1 and
/// BDF2 their own laws.  Returns nullopt for VBDF2.  Throws ValidationError
/// for forced problems and lid-driven grids.
std::optional<double> energy_identity_residual(SchemeKind applied, const SimulationState& before,
                                               const SimulationState& after, double tau,
                                               const ProblemSpec& problem,
                                               const StencilBank& bank, double e0);

struct ErrorNorms {
  double u_linf = 0.0;  ///< joint max over both components
  double u_l2 = 0.0;
  double p_linf = 0.0;  ///< after removing both discrete means
  double p_l2 = 0.0;
  double ucomp_linf = 0.0;
  double vcomp_linf = 0.0;
};

/// Velocity compared at t, pressure at t_p (defaults to t).
ErrorNorms error_norms(const VelocityField& u, const Field2D& p, const ProblemSpec& spec,
                       double t, const GridSpec& grid, std::optional<double> t_p = std::nullopt);

/// Corner vorticity dv/dx - du/dy.
Field2D vorticity(const VelocityField& u, const GridSpec& grid);

/// order_k = log(e_k / e_{k+1}) / log(tau_k / tau_{k+1}).
std::vector<double> observed_order(const std::vector<double>& errors,
                                   const std::vector<double>& taus);

struct EnergyRecord {
  long n = 0;
  double t = 0.0;
  double tau = 0.0;
  double E = 0.0;
  std::optional<double> E_hat;
  double dissipation = 0.0;
  std::optional<double> identity_residual;
  double div_inf = 0.0;
  std::optional<double> det_A;
};

}  // namespace nsstab
