#include "nsstab/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <mutex>
#include <sstream>

namespace nsstab {

std::string to_string(SchemeKind s) {
  switch (s) {
    case SchemeKind::CN1: return "CN1";
    case SchemeKind::CN2: return "CN2";
    case SchemeKind::BDF1: return "BDF1";
    case SchemeKind::BDF2: return "BDF2";
    case SchemeKind::VCN2: return "VCN2";
    case SchemeKind::VBDF2: return "VBDF2";
  }
  return "?";
}

SchemeKind scheme_from_string(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  for (SchemeKind s : {SchemeKind::CN1, SchemeKind::CN2, SchemeKind::BDF1, SchemeKind::BDF2,
                       SchemeKind::VCN2, SchemeKind::VBDF2}) {
    if (to_string(s) == up) return s;
  }
  throw ValidationError("unknown scheme '" + name + "' (expected cn1, cn2, bdf1, bdf2, vcn2, vbdf2)");
}

bool is_crank_nicolson(SchemeKind s) {
  return s == SchemeKind::CN1 || s == SchemeKind::CN2 || s == SchemeKind::VCN2;
}

bool is_second_order(SchemeKind s) { return s != SchemeKind::CN1 && s != SchemeKind::BDF1; }

bool is_variable_step(SchemeKind s) { return s == SchemeKind::VCN2 || s == SchemeKind::VBDF2; }

SchemeKind startup_scheme(SchemeKind s) {
  return is_crank_nicolson(s) ? SchemeKind::CN1 : SchemeKind::BDF1;
}

SchemeCoefficients scheme_coefficients(SchemeKind applied, double tau, double r) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("time step must be positive");
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("step ratio must be positive");
  SchemeCoefficients k;
  k.applied = applied;
  k.tau = tau;
  k.r = r;
  switch (applied) {
    case SchemeKind::CN1:
    case SchemeKind::CN2:
    case SchemeKind::VCN2:
      k.crank_nicolson = true;
      k.c = 2.0 / tau;
      k.mn = 2.0 / tau;
      k.forcing_dt = 0.5 * tau;
      if (applied != SchemeKind::CN1) {
        k.en = 1.0 + r / 2.0;
        k.enm1 = -r / 2.0;
      }
      break;
    case SchemeKind::BDF1:
      k.c = 1.0 / tau;
      k.mn = 1.0 / tau;
      k.forcing_dt = tau;
      break;
    case SchemeKind::BDF2:
    case SchemeKind::VBDF2: {
      const double a = (1.0 + 2.0 * r) / (tau * (1.0 + r));
      const double b = r * r / (tau * (1.0 + r));
      k.c = a;
      k.mn = a + b;
      k.mnm1 = -b;
      k.en = 1.0 + r;
      k.enm1 = -r;
      k.forcing_dt = tau;
      break;
    }
  }
  if (applied == SchemeKind::CN2 || applied == SchemeKind::BDF2) {
    if (r != 1.0) throw ValidationError(to_string(applied) + " is a uniform-step scheme; use the variable-step form");
  }
  return k;
}

AlphaBetaSystem assemble_alpha_beta(const ConvectionParts& parts, const VelocityField& u1,
                                    const VelocityField& u2, const VelocityField& u3,
                                    const GridSpec& grid) {
  AlphaBetaSystem s;
  s.A[0][0] = 1.0 - inner_product(parts.F, u1, grid);
  s.A[0][1] = -inner_product(parts.F, u2, grid);
  s.A[1][0] = -inner_product(parts.G, u1, grid);
  s.A[1][1] = 1.0 - inner_product(parts.G, u2, grid);
  s.b[0] = inner_product(parts.F, u3, grid);
  s.b[1] = inner_product(parts.G, u3, grid);
  return s;
}

AlphaBetaSystem assemble_alpha_beta(const VelocityField& ubar, const VelocityField& u1,
                                    const VelocityField& u2, const VelocityField& u3,
                                    const StencilBank& bank) {
  return assemble_alpha_beta(convection_parts(ubar, bank), u1, u2, u3, bank.grid());
}

std::array<double, 2> solve_2x2(const AlphaBetaSystem& sys, double eps_scale) {
  double amax = 0.0;
  for (const auto& row : sys.A) {
    for (double a : row) amax = std::max(amax, std::abs(a));
  }
  const double det = sys.det();
  if (!std::isfinite(det) || std::abs(det) <= eps_scale * (1.0 + amax * amax)) {
    std::ostringstream msg;
    msg << "alpha/beta system is singular (det A = " << det
        << "); the unique-solvability condition is violated";
    throw SolverError(msg.str());
  }
  const auto& A = sys.A;
  return {(sys.b[0] * A[1][1] - A[0][1] * sys.b[1]) / det,
          (A[0][0] * sys.b[1] - A[1][0] * sys.b[0]) / det};
}

namespace {

VelocityField combine(double en, const VelocityField& un, double enm1,
                      const std::optional<VelocityField>& unm1) {
  VelocityField out = en * un;
  if (enm1 != 0.0) {
    if (!unm1) throw ValidationError("scheme needs a previous velocity level");
    out.add_scaled(enm1, *unm1);
  }
  return out;
}

}  // namespace

StepResult advance(const SimulationState& state, const SchemeCoefficients& k,
                   const StokesPlan& plan, const ProblemSpec& problem, const Tolerances& tol) {
  if (std::abs(plan.c() - k.c) > 1e-11 * k.c) {
    std::ostringstream msg;
    msg << "plan constant c = " << plan.c() << " does not match " << to_string(k.applied)
        << " with tau = " << k.tau << " (needs c = " << k.c << ")";
    throw ValidationError(msg.str());
  }
  const GridSpec& grid = plan.grid();
  const StencilBank& bank = plan.bank();
  if (!state.Un.same_shape(VelocityField(grid))) {
    throw ValidationError("state does not match the plan's grid");
  }

  const VelocityField ubar = combine(k.en, state.Un, k.enm1, state.Unm1);
  ConvectionParts parts = convection_parts(ubar, bank, tol.den(grid));

  VelocityField m3 = combine(k.mn, state.Un, k.mnm1, state.Unm1);
  if (problem.forcing) {
    const double tf = state.t + k.forcing_dt;
    m3.u += sample_function(grid, Staggered::EW, problem.forcing->f1, tf);
    m3.v += sample_function(grid, Staggered::NS, problem.forcing->f2, tf);
    kernels::apply_mask(m3.u, bank.rules(Staggered::EW));
    kernels::apply_mask(m3.v, bank.rules(Staggered::NS));
  }
  if (grid.bc().lid_speed != 0.0) m3 += boundary_lift(bank, plan.nu());

  std::vector<VelocityField> rhs;
  rhs.reserve(3);
  rhs.push_back(-1.0 * parts.G);
  rhs.push_back(parts.F);
  rhs.push_back(std::move(m3));
  std::vector<StokesSolution> sol = plan.solve_batch(rhs);

  const AlphaBetaSystem sys = assemble_alpha_beta(parts, sol[0].u, sol[1].u, sol[2].u, grid);
  const auto [alpha, beta] = solve_2x2(sys, tol.eps_det_scale);

  VelocityField ustar = std::move(sol[2].u);
  ustar.add_scaled(alpha, sol[0].u).add_scaled(beta, sol[1].u);
  Field2D pstar = std::move(sol[2].p);
  pstar.add_scaled(alpha, sol[0].p).add_scaled(beta, sol[1].p);

  StepResult out;
  out.coeffs = k;
  out.det_A = sys.det();
  out.alpha = alpha;
  out.beta = beta;
  out.state.n = state.n + 1;
  out.state.t = state.t + k.tau;
  out.state.scheme = state.scheme;
  out.state.tau_n = k.tau;
  out.state.Unm1 = state.Un;
  out.state.Pn = std::move(pstar);
  if (k.crank_nicolson) {
    out.state.Un = 2.0 * ustar;
    out.state.Un -= state.Un;
  } else {
    out.state.Un = ustar;
  }
  out.U_eval = std::move(ustar);
  if (!out.state.Un.all_finite()) {
    throw SolverError("non-finite velocity after step " + std::to_string(out.state.n));
  }
  return out;
}

SchemeCoefficients coefficients_for(const SimulationState& state, double tau) {
  if (is_second_order(state.scheme) && !state.Unm1) {
    return scheme_coefficients(startup_scheme(state.scheme), tau);
  }
  double r = 1.0;
  if (is_variable_step(state.scheme)) {
    if (!(state.tau_n > 0.0)) throw ValidationError("variable-step history has no previous step size");
    r = tau / state.tau_n;
  }
  return scheme_coefficients(state.scheme, tau, r);
}

SimulationState step(const SimulationState& state, double tau, const StokesPlan& plan,
                     const ProblemSpec& problem, const Tolerances& tol) {
  return advance(state, coefficients_for(state, tau), plan, problem, tol).state;
}

PlanCache::PlanCache(const GridSpec& grid, double nu, std::size_t capacity)
    : grid_(grid), nu_(nu), capacity_(std::max<std::size_t>(1, capacity)) {}

PlanCache::Key PlanCache::key(double c) { return std::llround(std::log(c) / 1e-12); }

std::size_t PlanCache::size() const {
  std::shared_lock lock(mutex_);
  return plans_.size();
}

std::shared_ptr<const StokesPlan> PlanCache::get(double c) {
  const Key k = key(c);
  {
    std::shared_lock lock(mutex_);
    auto it = plans_.find(k);
    if (it != plans_.end()) {
      auto plan = it->second.first;
      lock.unlock();
      std::unique_lock ulock(mutex_);
      auto again = plans_.find(k);
      if (again != plans_.end()) order_.splice(order_.begin(), order_, again->second.second);
      return plan;
    }
  }
  auto plan = std::make_shared<const StokesPlan>(grid_, c, nu_);
  std::unique_lock lock(mutex_);
  auto it = plans_.find(k);
  if (it != plans_.end()) return it->second.first;
  ++builds_;
  order_.push_front(k);
  plans_.emplace(k, std::make_pair(plan, order_.begin()));
  while (plans_.size() > capacity_) {
    plans_.erase(order_.back());
    order_.pop_back();
  }
  return plan;
}

Integrator::Integrator(ProblemSpec problem, const GridSpec& grid, SchemeKind scheme,
                       Tolerances tol, std::shared_ptr<PlanCache> cache)
    : problem_(std::move(problem)),
      grid_(grid),
      bank_(grid),
      scheme_(scheme),
      tol_(tol),
      cache_(cache ? std::move(cache) : std::make_shared<PlanCache>(grid, problem_.nu)) {
  if (!(cache_->grid() == grid_) || cache_->nu() != problem_.nu) {
    throw ValidationError("plan cache was built for a different grid or viscosity");
  }
}

SimulationState Integrator::initial_state() const {
  SimulationState s;
  s.scheme = scheme_;
  s.Un = initial_velocity(problem_, grid_);
  s.Pn = Field2D(grid_);
  return s;
}

StepResult Integrator::step(const SimulationState& state, double tau) const {
  const SchemeCoefficients k = coefficients_for(state, tau);
  const auto plan = cache_->get(k.c);
  return advance(state, k, *plan, problem_, tol_);
}

SimulationState init_state(const ProblemSpec& problem, const GridSpec& grid, SchemeKind scheme,
                           double tau, const Tolerances& tol) {
  const Integrator integrator(problem, grid, scheme, tol);
  SimulationState s = integrator.initial_state();
  if (is_second_order(scheme)) s = integrator.step(s, tau).state;
  return s;
}

}  // namespace nsstab
