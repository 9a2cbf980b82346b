/// @file problems.hpp
/// @brief Benchmark problems: manufactured flow, Taylor-Green, cavity, Kelvin-Helmholtz.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nsstab/field.hpp"

namespace nsstab {

struct Forcing {
  SpaceTimeFunction f1;
  SpaceTimeFunction f2;
};

struct ExactSolution {
  SpaceTimeFunction u;
  SpaceTimeFunction v;
  SpaceTimeFunction p;
};

/// Stop when ||U^n - U^{n-1}||_inf <= tol.
struct SteadyStateCriterion {
  double tol = 1e-6;
  long max_steps = 1000000;

  bool reached(const VelocityField& un, const VelocityField& unm1) const;
};

struct ProblemSpec {
  std::string name;
  double nu = 1.0;
  double lx = 1.0;
  double ly = 1.0;
  BoundaryKind bc;
  /// Final time; unused when `steady` is set.
  double t_final = 1.0;
  SpaceTimeFunction u0;
  SpaceTimeFunction v0;
  std::optional<Forcing> forcing;
  std::optional<ExactSolution> exact;
  std::function<double(double)> exact_energy;
  std::optional<SteadyStateCriterion> steady;
};

ProblemSpec manufactured_flow(double nu = 0.1);
ProblemSpec taylor_green(double nu = 0.001);
ProblemSpec lid_driven_cavity(double re);
/// Time unit 1/28; T = 50 time units, or 200 with paper_scale.
ProblemSpec kelvin_helmholtz(bool paper_scale = false);

/// Looks a problem up by name ("manufactured", "taylor_green", "cavity",
/// "kelvin_helmholtz"); `param` is nu for manufactured and taylor_green, Re for cavity.
ProblemSpec problem_by_name(const std::string& name, std::optional<double> param = std::nullopt,
                            bool paper_scale = false);

namespace kh {
inline constexpr double delta0 = 1.0 / 28.0;
inline constexpr double cn = 1e-3;
inline constexpr double time_unit = 1.0 / 28.0;
}  // namespace kh

/// U^0 sampled at the staggered points, wall entries zeroed.
VelocityField initial_velocity(const ProblemSpec& problem, const GridSpec& grid);
GridSpec problem_grid(const ProblemSpec& problem, int nx, int ny);

}  // namespace nsstab
