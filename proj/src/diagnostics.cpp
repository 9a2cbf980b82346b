#include "nsstab/diagnostics.hpp"

#include <cmath>

namespace nsstab {

double kinetic_energy(const VelocityField& u, const GridSpec& grid) {
  return 0.5 * inner_product(u, u, grid);
}

double bdf2_energy(const VelocityField& un, const VelocityField& unm1, const GridSpec& grid) {
  const VelocityField w = 2.0 * un - unm1;
  return 0.25 * (inner_product(un, un, grid) + inner_product(w, w, grid));
}

double dissipation(const VelocityField& u, const StencilBank& bank, double nu) {
  return nu * inner_product(laplacian(u, bank), u, bank.grid());
}

double divergence_inf(const VelocityField& u, const StencilBank& bank) {
  return max_abs(divergence(u, bank));
}

std::optional<double> energy_identity_residual(SchemeKind applied, const SimulationState& before,
                                               const SimulationState& after, double tau,
                                               const ProblemSpec& problem,
                                               const StencilBank& bank, double e0) {
  if (problem.forcing) throw ValidationError("energy identity holds only for unforced steps");
  const GridSpec& grid = bank.grid();
  if (grid.bc().lid_speed != 0.0) {
    throw ValidationError("energy identity holds only for homogeneous boundary data");
  }
  const double nu = problem.nu;
  const double scale = std::max(1.0, e0);
  const VelocityField& un = before.Un;
  const VelocityField& unp1 = after.Un;
  switch (applied) {
    case SchemeKind::CN1:
    case SchemeKind::CN2:
    case SchemeKind::VCN2: {
      const VelocityField half = 0.5 * (unp1 + un);
      const double lhs = (kinetic_energy(unp1, grid) - kinetic_energy(un, grid)) / tau;
      return std::abs(lhs - dissipation(half, bank, nu)) / scale;
    }
    case SchemeKind::BDF1: {
      const VelocityField d = unp1 - un;
      const double lhs = (kinetic_energy(unp1, grid) - kinetic_energy(un, grid)) / tau;
      const double rhs = dissipation(unp1, bank, nu) - inner_product(d, d, grid) / (2.0 * tau);
      return std::abs(lhs - rhs) / scale;
    }
    case SchemeKind::BDF2: {
      if (!before.Unm1) throw ValidationError("BDF2 energy identity needs U^{n-1}");
      const VelocityField& unm1 = *before.Unm1;
      const VelocityField d = unp1 - 2.0 * un + unm1;
      const double lhs = (bdf2_energy(unp1, un, grid) - bdf2_energy(un, unm1, grid)) / tau;
      const double rhs = dissipation(unp1, bank, nu) - inner_product(d, d, grid) / (4.0 * tau);
      return std::abs(lhs - rhs) / scale;
    }
    case SchemeKind::VBDF2:
      return std::nullopt;
  }
  return std::nullopt;
}

ErrorNorms error_norms(const VelocityField& u, const Field2D& p, const ProblemSpec& spec,
                       double t, const GridSpec& grid, std::optional<double> t_p) {
  if (!spec.exact) throw ValidationError("problem '" + spec.name + "' has no exact solution");
  const VelocityField ue(sample_function(grid, Staggered::EW, spec.exact->u, t),
                         sample_function(grid, Staggered::NS, spec.exact->v, t));
  Field2D pe = sample_function(grid, Staggered::C, spec.exact->p, t_p.value_or(t));
  const VelocityField eu = u - ue;
  Field2D ep = p - pe;
  const double m = mean(ep);
  for (double& x : ep.values()) x -= m;
  ErrorNorms e;
  e.ucomp_linf = max_abs(eu.u);
  e.vcomp_linf = max_abs(eu.v);
  e.u_linf = std::max(e.ucomp_linf, e.vcomp_linf);
  e.u_l2 = std::sqrt(inner_product(eu, eu, grid));
  const Norms pn = norms(ep, grid);
  e.p_linf = pn.linf;
  e.p_l2 = pn.l2;
  return e;
}

Field2D vorticity(const VelocityField& u, const GridSpec& grid) {
  return vorticity(u, StencilBank(grid));
}

std::vector<double> observed_order(const std::vector<double>& errors,
                                   const std::vector<double>& taus) {
  if (errors.size() != taus.size() || errors.size() < 2) {
    throw ValidationError("observed_order: need at least two (error, tau) pairs of equal length");
  }
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!(errors[k] > 0.0) || !std::isfinite(errors[k])) {
      throw ValidationError("observed_order: errors must be positive and finite");
    }
    if (k > 0 && !(taus[k] < taus[k - 1])) {
      throw ValidationError("observed_order: taus must be strictly decreasing");
    }
  }
  std::vector<double> order(errors.size() - 1);
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    order[k] = std::log(errors[k] / errors[k + 1]) / std::log(taus[k] / taus[k + 1]);
  }
  return order;
}

}  // namespace nsstab
