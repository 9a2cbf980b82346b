#include "nsstab/properties.hpp"

#include <cmath>

namespace nsstab {

Field2D random_field(const GridSpec& grid, Staggered space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field2D a(grid);
  for (double& x : a.values()) x = dist(rng);
  kernels::apply_mask(a, axis_rules(grid, space));
  return a;
}

VelocityField random_velocity(const GridSpec& grid, std::mt19937_64& rng) {
  Field2D u = random_field(grid, Staggered::EW, rng);
  Field2D v = random_field(grid, Staggered::NS, rng);
  return {std::move(u), std::move(v)};
}

namespace {

BoundaryKind kind_of(BoundaryType t) {
  switch (t) {
    case BoundaryType::PeriodicXY: return BoundaryKind::periodic();
    case BoundaryType::DirichletXY: return BoundaryKind::dirichlet();
    case BoundaryType::PeriodicXSlipY: return BoundaryKind::periodic_x_slip_y();
  }
  return {};
}

}  // namespace

std::vector<PropertyResult> run_property_suite(const PropertyOptions& opts) {
  std::vector<PropertyResult> out;
  std::mt19937_64 rng(opts.seed);
  for (BoundaryType type : opts.kinds) {
    std::vector<StencilBank> banks;
    for (auto [nx, ny] : opts.grids) banks.emplace_back(build_grid(1.0, 1.0, nx, ny, kind_of(type)));
    PropertyResult anti{"b_antisymmetry", type, 0, 0.0, 1e-13, false};
    PropertyResult adj{"adjointness", type, 0, 0.0, 1e-13, false};
    PropertyResult dg{"div_grad", type, 0, 0.0, 1e-12, false};
    for (long trial = 0; trial < opts.trials; ++trial) {
      const StencilBank& bank = banks[trial % banks.size()];
      const GridSpec& g = bank.grid();
      const VelocityField u = random_velocity(g, rng);
      const VelocityField v = random_velocity(g, rng);
      const Field2D p = random_field(g, Staggered::C, rng);

      const VelocityField b = b_apply(u, v, bank);
      anti.defect = std::max(anti.defect, std::abs(inner_product(b, v, g)) / inner_product(v, v, g));

      const double lhs = inner_product(gradient(p, bank), v, g);
      const double rhs = inner_product(p, divergence(v, bank), g);
      adj.defect = std::max(adj.defect, std::abs(lhs + rhs));

      const Field2D diff = divergence(gradient(p, bank), bank) - laplacian(p, Staggered::C, bank);
      dg.defect = std::max(dg.defect, max_abs(diff));
    }
    for (PropertyResult* r : {&anti, &adj, &dg}) {
      r->trials = opts.trials;
      r->pass = r->defect <= r->tol;
      out.push_back(*r);
    }
  }
  return out;
}

}  // namespace nsstab
