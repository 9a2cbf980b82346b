/// @file schemes.hpp
/// @brief CN1/CN2/BDF1/BDF2 and their variable-step forms VCN2/VBDF2.
///
/// Every step solves (c - nu Delta_h) U + B(Ubar, U) + grad P = M3 through
/// three Stokes solves with right-hand sides -G(Ubar), F(Ubar), M3 and a 2x2
/// system for the weights (alpha, beta) of the first two.
#pragma once

#include <array>
#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>

#include "nsstab/problems.hpp"
#include "nsstab/stokes.hpp"

namespace nsstab {

enum class SchemeKind { CN1, CN2, BDF1, BDF2, VCN2, VBDF2 };

std::string to_string(SchemeKind s);
/// Accepts lower or upper case names; throws ValidationError otherwise.
SchemeKind scheme_from_string(const std::string& name);
bool is_crank_nicolson(SchemeKind s);
bool is_second_order(SchemeKind s);
bool is_variable_step(SchemeKind s);
/// CN1 for the CN family, BDF1 for the BDF family.
SchemeKind startup_scheme(SchemeKind s);

struct SimulationState {
  long n = 0;
  double t = 0.0;
  VelocityField Un;
  std::optional<VelocityField> Unm1;
  Field2D Pn;
  /// Size of the step that produced Un (0 before the first step).
  double tau_n = 0.0;
  SchemeKind scheme = SchemeKind::CN2;
};

/// One step of `applied` with size tau and adjacent ratio r = tau / tau_n:
///   c U - nu Delta_h U + ... = mn Un + mnm1 Unm1 + f(t + forcing_dt)
///   Ubar = en Un + enm1 Unm1
/// For CN the solved field is U^{n+1/2} and U^{n+1} = 2 U^{n+1/2} - U^n.
struct SchemeCoefficients {
  SchemeKind applied = SchemeKind::CN1;
  double tau = 0.0;
  double r = 1.0;
  double c = 0.0;
  double mn = 0.0;
  double mnm1 = 0.0;
  double en = 1.0;
  double enm1 = 0.0;
  double forcing_dt = 0.0;
  bool crank_nicolson = false;
};

SchemeCoefficients scheme_coefficients(SchemeKind applied, double tau, double r = 1.0);

struct AlphaBetaSystem {
  std::array<std::array<double, 2>, 2> A{};
  std::array<double, 2> b{};

  double det() const { return A[0][0] * A[1][1] - A[0][1] * A[1][0]; }
};

AlphaBetaSystem assemble_alpha_beta(const ConvectionParts& parts, const VelocityField& u1,
                                    const VelocityField& u2, const VelocityField& u3,
                                    const GridSpec& grid);
AlphaBetaSystem assemble_alpha_beta(const VelocityField& ubar, const VelocityField& u1,
                                    const VelocityField& u2, const VelocityField& u3,
                                    const StencilBank& bank);

inline constexpr double default_eps_det_scale = 1e-12;

/// Singular when |det A| <= eps_scale * (1 + max|A_ij|^2).
std::array<double, 2> solve_2x2(const AlphaBetaSystem& sys,
                                double eps_scale = default_eps_det_scale);

struct Tolerances {
  /// Negative selects the grid default 1e-14 * Lx * Ly.
  double eps_den = -1.0;
  double eps_det_scale = default_eps_det_scale;

  double den(const GridSpec& grid) const { return eps_den < 0.0 ? default_eps_den(grid) : eps_den; }
};

struct StepResult {
  SimulationState state;
  SchemeCoefficients coeffs;
  double det_A = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  /// U^{n+1/2} for CN, U^{n+1} for BDF.
  VelocityField U_eval;
};

/// The core transition shared by all schemes.  The plan's c must match coeffs.c.
StepResult advance(const SimulationState& state, const SchemeCoefficients& coeffs,
                   const StokesPlan& plan, const ProblemSpec& problem,
                   const Tolerances& tol = {});

/// Coefficients `state` needs for a step of size tau: the startup scheme when
/// a second-order scheme has no history, ratio tau / tau_n for variable schemes.
SchemeCoefficients coefficients_for(const SimulationState& state, double tau);

/// One step with a caller-provided plan; throws ValidationError when the
/// plan's c does not match the scheme.
SimulationState step(const SimulationState& state, double tau, const StokesPlan& plan,
                     const ProblemSpec& problem, const Tolerances& tol = {});

/// Memoizes plans on quantized c (relative quantum 1e-12), bounded LRU.
class PlanCache {
 public:
  PlanCache(const GridSpec& grid, double nu, std::size_t capacity = 32);

  std::shared_ptr<const StokesPlan> get(double c);
  std::size_t size() const;
  long builds() const { return builds_; }
  const GridSpec& grid() const { return grid_; }
  double nu() const { return nu_; }

 private:
  using Key = std::int64_t;
  static Key key(double c);

  GridSpec grid_;
  double nu_;
  std::size_t capacity_;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::pair<std::shared_ptr<const StokesPlan>, std::list<Key>::iterator>> plans_;
  std::list<Key> order_;
  long builds_ = 0;
};

/// Drives a scheme on one problem and grid, fetching plans from a cache.
class Integrator {
 public:
  Integrator(ProblemSpec problem, const GridSpec& grid, SchemeKind scheme, Tolerances tol = {},
             std::shared_ptr<PlanCache> cache = nullptr);

  SimulationState initial_state() const;
  StepResult step(const SimulationState& state, double tau) const;

  const ProblemSpec& problem() const { return problem_; }
  const GridSpec& grid() const { return grid_; }
  SchemeKind scheme() const { return scheme_; }
  const Tolerances& tolerances() const { return tol_; }
  const StencilBank& bank() const { return bank_; }
  PlanCache& cache() const { return *cache_; }

 private:
  ProblemSpec problem_;
  GridSpec grid_;
  StencilBank bank_;
  SchemeKind scheme_;
  Tolerances tol_;
  std::shared_ptr<PlanCache> cache_;
};

/// U^0 from the problem; second-order schemes also take the first-order startup step.
SimulationState init_state(const ProblemSpec& problem, const GridSpec& grid, SchemeKind scheme,
                           double tau, const Tolerances& tol = {});

}  // namespace nsstab
