#include "nsstab/operators.hpp"

namespace nsstab {

StencilBank::StencilBank(const GridSpec& grid)
    : grid_(grid),
      ew_(axis_rules(grid, Staggered::EW)),
      ns_(axis_rules(grid, Staggered::NS)),
      c_(axis_rules(grid, Staggered::C)) {}

const AxisRules& StencilBank::rules(Staggered space) const {
  switch (space) {
    case Staggered::EW: return ew_;
    case Staggered::NS: return ns_;
    default: return c_;
  }
}

void StencilBank::check(const Field2D& a) const {
  if (a.nx() != grid_.nx() || a.ny() != grid_.ny()) {
    throw ValidationError("field is " + std::to_string(a.nx()) + "x" + std::to_string(a.ny()) +
                          ", grid is " + std::to_string(grid_.nx()) + "x" +
                          std::to_string(grid_.ny()));
  }
}

namespace {

// Weights (w_{-1}, w_0, w_{+1}) of a stencil row.
struct Weights {
  double m;
  double c;
  double p;
};

Weights weights(Stencil s, double h) {
  switch (s) {
    case Stencil::Average: return {0.0, 0.5, 0.5};
    case Stencil::Central: return {-0.5 / h, 0.0, 0.5 / h};
    case Stencil::Forward: return {0.0, -1.0 / h, 1.0 / h};
    case Stencil::Second: return {1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)};
  }
  return {};
}

Weights transposed(Weights w) { return {w.p, w.c, w.m}; }

}  // namespace

Field2D StencilBank::apply_x(Stencil s, const Field2D& a, bool transpose) const {
  check(a);
  Weights w = weights(s, grid_.hx());
  if (transpose) w = transposed(w);
  const int nx = a.nx();
  const int ny = a.ny();
  Field2D out(nx, ny);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    const int im = (i + nx - 1) % nx;
    const int ip = (i + 1) % nx;
    for (int j = 0; j < ny; ++j) out(i, j) = w.m * a(im, j) + w.c * a(i, j) + w.p * a(ip, j);
  }
  return out;
}

Field2D StencilBank::apply_y(Stencil s, const Field2D& a, bool transpose) const {
  check(a);
  Weights w = weights(s, grid_.hy());
  if (transpose) w = transposed(w);
  const int nx = a.nx();
  const int ny = a.ny();
  Field2D out(nx, ny);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int jm = (j + ny - 1) % ny;
      const int jp = (j + 1) % ny;
      out(i, j) = w.m * a(i, jm) + w.c * a(i, j) + w.p * a(i, jp);
    }
  }
  return out;
}

Field2D divergence(const VelocityField& w, const StencilBank& bank) {
  if (w.u.nx() != bank.grid().nx() || w.u.ny() != bank.grid().ny() || !w.u.same_shape(w.v)) {
    throw ValidationError("divergence: velocity shape does not match grid");
  }
  return kernels::divergence(w.u, bank.rules(Staggered::EW), w.v, bank.rules(Staggered::NS),
                             bank.spacing());
}

VelocityField gradient(const Field2D& p, const StencilBank& bank) {
  if (p.nx() != bank.grid().nx() || p.ny() != bank.grid().ny()) {
    throw ValidationError("gradient: pressure shape does not match grid");
  }
  VelocityField g;
  kernels::gradient(p, bank.rules(Staggered::C), bank.rules(Staggered::EW),
                    bank.rules(Staggered::NS), bank.spacing(), g.u, g.v);
  return g;
}

Field2D laplacian(const Field2D& a, Staggered space, const StencilBank& bank) {
  if (a.nx() != bank.grid().nx() || a.ny() != bank.grid().ny()) {
    throw ValidationError("laplacian: field shape does not match grid");
  }
  return kernels::laplacian(a, bank.rules(space), bank.spacing());
}

VelocityField laplacian(const VelocityField& w, const StencilBank& bank) {
  return {laplacian(w.u, Staggered::EW, bank), laplacian(w.v, Staggered::NS, bank)};
}

Field2D vorticity(const VelocityField& w, const StencilBank& bank) {
  return kernels::vorticity(w.u, bank.rules(Staggered::EW), w.v, bank.rules(Staggered::NS),
                            bank.spacing());
}

VelocityField boundary_lift(const StencilBank& bank, double nu) {
  const GridSpec& g = bank.grid();
  VelocityField lift(g);
  if (g.bc().type != BoundaryType::DirichletXY || g.bc().lid_speed == 0.0) return lift;
  const double value = nu * 2.0 * g.bc().lid_speed / (g.hy() * g.hy());
  for (int i = 1; i < g.nx(); ++i) lift.u(i, g.ny() - 1) = value;
  return lift;
}

double default_eps_den(const GridSpec& grid) { return 1e-14 * grid.lx() * grid.ly(); }

ConvectionParts convection_parts(const VelocityField& u, const StencilBank& bank,
                                 double eps_den) {
  ConvectionParts parts;
  parts.F = u;
  parts.denom = inner_product(u, u, bank.grid());
  if (!(parts.denom > eps_den)) {
    parts.G = VelocityField(bank.grid());
    return parts;
  }
  kernels::convection(u.u, bank.rules(Staggered::EW), u.v, bank.rules(Staggered::NS),
                      bank.spacing(), parts.G.u, parts.G.v);
  parts.G *= 1.0 / parts.denom;
  return parts;
}

ConvectionParts convection_parts(const VelocityField& u, const StencilBank& bank) {
  return convection_parts(u, bank, default_eps_den(bank.grid()));
}

VelocityField b_apply(const ConvectionParts& parts, const VelocityField& v,
                      const GridSpec& grid) {
  const double fv = inner_product(parts.F, v, grid);
  const double gv = inner_product(parts.G, v, grid);
  VelocityField out = fv * parts.G;
  out.add_scaled(-gv, parts.F);
  return out;
}

VelocityField b_apply(const VelocityField& ubar, const VelocityField& v,
                      const StencilBank& bank) {
  return b_apply(convection_parts(ubar, bank), v, bank.grid());
}

}  // namespace nsstab
