#include "nsstab/problems.hpp"

#include <cmath>
#include <numbers>

#include "nsstab/kernels.hpp"

namespace nsstab {

namespace {
constexpr double pi = std::numbers::pi;

double sq(double x) { return x * x; }
}  // namespace

bool SteadyStateCriterion::reached(const VelocityField& un, const VelocityField& unm1) const {
  return max_abs(un - unm1) <= tol;
}

ProblemSpec manufactured_flow(double nu_in) {
  if (!(nu_in > 0.0)) throw ValidationError("manufactured_flow: nu must be positive");
  ProblemSpec p;
  p.name = "manufactured";
  p.nu = nu_in;
  p.bc = BoundaryKind::periodic();
  p.t_final = 1.0;
  const double nu = p.nu;
  auto u = [](double x, double y, double t) { return std::exp(t) * sq(std::sin(pi * x)) * std::sin(2 * pi * y); };
  auto v = [](double x, double y, double t) { return -std::exp(t) * std::sin(2 * pi * x) * sq(std::sin(pi * y)); };
  auto pr = [](double x, double y, double t) { return std::exp(t) * std::sin(2 * pi * x) * std::sin(2 * pi * y); };
  p.u0 = [u](double x, double y, double) { return u(x, y, 0.0); };
  p.v0 = [v](double x, double y, double) { return v(x, y, 0.0); };
  p.exact = ExactSolution{u, v, pr};
  // f = u_t - nu Lap u + (u.grad) u + grad p
  p.forcing = Forcing{
      [=](double x, double y, double t) {
        const double e = std::exp(t);
        const double sx = std::sin(pi * x), s2x = std::sin(2 * pi * x), c2x = std::cos(2 * pi * x);
        const double sy = std::sin(pi * y), s2y = std::sin(2 * pi * y), c2y = std::cos(2 * pi * y);
        const double uu = e * sx * sx * s2y;
        const double vv = -e * s2x * sy * sy;
        const double ux = e * pi * s2x * s2y;
        const double uy = e * 2 * pi * sx * sx * c2y;
        const double uxx = e * 2 * pi * pi * c2x * s2y;
        const double uyy = -e * 4 * pi * pi * sx * sx * s2y;
        const double px = e * 2 * pi * c2x * s2y;
        return uu - nu * (uxx + uyy) + uu * ux + vv * uy + px;
      },
      [=](double x, double y, double t) {
        const double e = std::exp(t);
        const double sx = std::sin(pi * x), s2x = std::sin(2 * pi * x), c2x = std::cos(2 * pi * x);
        const double sy = std::sin(pi * y), s2y = std::sin(2 * pi * y), c2y = std::cos(2 * pi * y);
        const double uu = e * sx * sx * s2y;
        const double vv = -e * s2x * sy * sy;
        const double vx = -e * 2 * pi * c2x * sy * sy;
        const double vy = -e * pi * s2x * s2y;
        const double vxx = e * 4 * pi * pi * s2x * sy * sy;
        const double vyy = -e * 2 * pi * pi * s2x * c2y;
        const double py = e * 2 * pi * s2x * c2y;
        return vv - nu * (vxx + vyy) + uu * vx + vv * vy + py;
      }};
  return p;
}

ProblemSpec taylor_green(double nu) {
  if (!(nu > 0.0)) throw ValidationError("taylor_green: nu must be positive");
  ProblemSpec p;
  p.name = "taylor_green";
  p.nu = nu;
  p.bc = BoundaryKind::periodic();
  p.t_final = 20.0;
  auto u = [nu](double x, double y, double t) {
    return std::sin(2 * pi * x) * std::cos(2 * pi * y) * std::exp(-8 * pi * pi * nu * t);
  };
  auto v = [nu](double x, double y, double t) {
    return -std::cos(2 * pi * x) * std::sin(2 * pi * y) * std::exp(-8 * pi * pi * nu * t);
  };
  auto pr = [nu](double x, double y, double t) {
    return 0.25 * (std::cos(4 * pi * x) + std::cos(4 * pi * y)) * std::exp(-16 * pi * pi * nu * t);
  };
  p.u0 = [u](double x, double y, double) { return u(x, y, 0.0); };
  p.v0 = [v](double x, double y, double) { return v(x, y, 0.0); };
  p.exact = ExactSolution{u, v, pr};
  p.exact_energy = [nu](double t) { return 0.25 * std::exp(-16 * pi * pi * nu * t); };
  return p;
}

ProblemSpec lid_driven_cavity(double re) {
  if (!(re > 0.0)) throw ValidationError("lid_driven_cavity: Re must be positive");
  ProblemSpec p;
  p.name = "cavity";
  p.nu = 1.0 / re;
  p.bc = BoundaryKind::dirichlet(1.0);
  p.t_final = 0.0;
  p.u0 = [](double, double, double) { return 0.0; };
  p.v0 = [](double, double, double) { return 0.0; };
  p.steady = SteadyStateCriterion{};
  return p;
}

ProblemSpec kelvin_helmholtz(bool paper_scale) {
  using namespace kh;
  ProblemSpec p;
  p.name = "kelvin_helmholtz";
  p.nu = 1.0 / 2800.0;
  p.bc = BoundaryKind::periodic_x_slip_y();
  p.t_final = (paper_scale ? 200.0 : 50.0) * time_unit;
  // psi = exp(-(y-1/2)^2/delta0^2) (cos 8 pi x + cos 20 pi x)
  p.u0 = [](double x, double y, double) {
    const double g = std::exp(-sq(y - 0.5) / sq(delta0));
    const double psi_y = -2.0 * (y - 0.5) / sq(delta0) * g * (std::cos(8 * pi * x) + std::cos(20 * pi * x));
    return std::tanh((2.0 * y - 1.0) / delta0) + cn * psi_y;
  };
  p.v0 = [](double x, double y, double) {
    const double g = std::exp(-sq(y - 0.5) / sq(delta0));
    const double psi_x = g * (-8 * pi * std::sin(8 * pi * x) - 20 * pi * std::sin(20 * pi * x));
    return -cn * psi_x;
  };
  return p;
}

ProblemSpec problem_by_name(const std::string& name, std::optional<double> param,
                            bool paper_scale) {
  if (name == "manufactured" || name == "manufactured_flow") return manufactured_flow(param.value_or(0.1));
  if (name == "taylor_green") return taylor_green(param.value_or(0.001));
  if (name == "cavity" || name == "lid_driven_cavity") return lid_driven_cavity(param.value_or(100.0));
  if (name == "kelvin_helmholtz" || name == "kh") return kelvin_helmholtz(paper_scale);
  throw ValidationError("unknown problem '" + name + "'");
}

VelocityField initial_velocity(const ProblemSpec& problem, const GridSpec& grid) {
  VelocityField u(sample_function(grid, Staggered::EW, problem.u0, 0.0),
                  sample_function(grid, Staggered::NS, problem.v0, 0.0));
  kernels::apply_mask(u.u, axis_rules(grid, Staggered::EW));
  kernels::apply_mask(u.v, axis_rules(grid, Staggered::NS));
  return u;
}

GridSpec problem_grid(const ProblemSpec& problem, int nx, int ny) {
  return build_grid(problem.lx, problem.ly, nx, ny, problem.bc);
}

}  // namespace nsstab
