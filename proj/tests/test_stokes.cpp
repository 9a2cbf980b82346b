#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nsstab/properties.hpp"
#include "nsstab/stokes.hpp"
#include "oracles.hpp"

using namespace nsstab;
using std::numbers::pi;

namespace {

const BoundaryKind all_kinds[] = {BoundaryKind::periodic(), BoundaryKind::dirichlet(),
                                  BoundaryKind::periodic_x_slip_y()};

// Discrete curl of a random corner stream function; zero on walls.
VelocityField solenoidal(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int nx = g.nx(), ny = g.ny();
  Field2D psi(nx + 1, ny + 1);
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) {
      const bool wall_x = !g.periodic_x() && (i == 0 || i == nx);
      const bool wall_y = !g.periodic_y() && (j == 0 || j == ny);
      psi(i, j) = (wall_x || wall_y) ? 0.0 : d(rng);
    }
  if (g.periodic_x())
    for (int j = 0; j <= ny; ++j) psi(nx, j) = psi(0, j);
  if (g.periodic_y())
    for (int i = 0; i <= nx; ++i) psi(i, ny) = psi(i, 0);
  VelocityField w(g);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      w.u(i, j) = (psi(i, j + 1) - psi(i, j)) / g.hy();
      w.v(i, j) = -(psi(i + 1, j) - psi(i, j)) / g.hx();
    }
  return w;
}

Field2D zero_mean(Field2D p) {
  const double m = mean(p);
  for (auto& x : p.values()) x -= m;
  return p;
}

VelocityField stokes_operator(const VelocityField& u, const StencilBank& bank, double c, double nu) {
  VelocityField r = c * u;
  r.add_scaled(-nu, laplacian(u, bank));
  return r;
}

}  // namespace

TEST_CASE("plan eigenvalue tables") {
  auto g = build_grid(1, 1, 8, 8, BoundaryKind::periodic());
  auto plan = plan_solver(g, 20.0, 0.1);
  CHECK(plan.backend() == StokesBackend::Spectral);
  REQUIRE(plan.lambda_x().size() == 8);
  CHECK(plan.lambda_x()[0] == 0.0);
  CHECK(plan.lambda_x()[4] == doctest::Approx(-4.0 / (g.hx() * g.hx())).epsilon(1e-15));
  for (int k = 0; k < 8; ++k)
    CHECK(plan.lambda_y()[k] == doctest::Approx(oracle::laplace_eigenvalue(k, 8, g.hy())));

  auto g4 = build_grid(1, 1, 4, 4, BoundaryKind::periodic());
  auto p4 = plan_solver(g4, 2.0, 1.0);
  for (double lx : p4.lambda_x())
    for (double ly : p4.lambda_y()) CHECK(2.0 - 1.0 * (lx + ly) > 0.0);

  auto gs = build_grid(1, 1, 8, 6, BoundaryKind::periodic_x_slip_y());
  auto ps = plan_solver(gs, 1.0, 1.0);
  CHECK(ps.backend() == StokesBackend::Wavenumber);
  CHECK(ps.lambda_x().size() == 8);
  CHECK(ps.lambda_y().empty());
  auto gd = build_grid(1, 1, 8, 6, BoundaryKind::dirichlet());
  CHECK(plan_solver(gd, 1.0, 1.0).backend() == StokesBackend::Saddle);
}

TEST_CASE("plan rejects invalid parameters") {
  auto g = build_grid(1, 1, 8, 8, BoundaryKind::periodic());
  CHECK_THROWS_AS(plan_solver(g, 0.0, 0.1), ValidationError);
  CHECK_THROWS_AS(plan_solver(g, 1.0, -0.1), ValidationError);
  auto gd = build_grid(1, 1, 8, 8, BoundaryKind::dirichlet());
  CHECK_THROWS_AS(StokesPlan(gd, 1.0, 1.0, StokesBackend::Spectral), ValidationError);
  CHECK_THROWS_AS(StokesPlan(g, 1.0, 1.0, StokesBackend::Wavenumber), ValidationError);
  auto plan = plan_solver(g, 1.0, 1.0);
  CHECK_THROWS_AS(plan.solve(VelocityField(build_grid(1, 1, 8, 7, BoundaryKind::periodic()))),
                  ValidationError);
  CHECK_THROWS_AS(plan.helmholtz(Field2D(g), Staggered::C), ValidationError);
}

TEST_CASE("dirichlet plan roundtrip on 16x16") {
  std::mt19937_64 rng(21);
  const double tau = 1e-2, nu = 2e-4, c = 2.0 / tau;
  auto g = build_grid(1, 1, 16, 16, BoundaryKind::dirichlet());
  auto plan = plan_solver(g, c, nu);
  auto w = solenoidal(g, rng);
  auto q = zero_mean(random_field(g, Staggered::C, rng));
  auto m = stokes_operator(w, plan.bank(), c, nu) + gradient(q, plan.bank());
  auto sol = solve_stokes(plan, m);
  CHECK(max_abs(sol.u - w) <= 1e-10 * max_abs(w));
  CHECK(max_abs(sol.p - q) <= 1e-10 * max_abs(q));
}

TEST_CASE("poisson examples") {
  for (auto bc : all_kinds) {
    auto g = build_grid(1, 1, 16, 12, bc);
    auto plan = plan_solver(g, 3.0, 0.5);
    CHECK(max_abs(solve_poisson(plan, Field2D(g))) == 0.0);

    auto s = zero_mean(sample_function(g, Staggered::C, [](double x, double y, double) {
      return std::cos(2 * pi * x) * std::cos(pi * y) + 0.3 * std::sin(2 * pi * x);
    }));
    auto p = solve_poisson(plan, laplacian(s, Staggered::C, plan.bank()));
    CHECK(max_abs(p - s) <= 1e-12);
    CHECK(std::abs(mean(p)) <= 1e-14);

    CHECK_THROWS_AS(solve_poisson(plan, Field2D(g, 1.0)), ValidationError);
  }
  auto g = build_grid(1, 1, 16, 16, BoundaryKind::periodic());
  auto plan = plan_solver(g, 3.0, 0.5);
  auto s = sample_function(g, Staggered::C, [](double x, double y, double) {
    return std::sin(2 * pi * x) * std::sin(2 * pi * y);
  });
  auto p = solve_poisson(plan, laplacian(s, Staggered::C, plan.bank()));
  CHECK(max_abs(p - zero_mean(s)) <= 1e-12);

  std::mt19937_64 rng(22);
  auto r = zero_mean(random_field(g, Staggered::C, rng));
  auto x = solve_poisson(plan, r);
  auto res = laplacian(x, Staggered::C, plan.bank()) - r;
  CHECK(norms(res, g).l2 <= 1e-11 * norms(r, g).l2);
}

TEST_CASE("helmholtz examples") {
  const double c = 7.0, nu = 0.3;
  auto g = build_grid(1, 1, 8, 8, BoundaryKind::periodic());
  auto plan = plan_solver(g, c, nu);
  for (auto sp : {Staggered::EW, Staggered::NS}) {
    auto x = solve_helmholtz(plan, Field2D(g, c), sp);
    CHECK(max_abs(x - Field2D(g, 1.0)) <= 1e-14);
  }
  for (auto sp : {Staggered::EW, Staggered::NS}) {
    auto e = sample_function(g, sp, [](double x, double y, double) {
      return std::sin(2 * pi * x) * std::cos(2 * pi * y);
    });
    const double lam = oracle::laplace_eigenvalue(1, 8, g.hx()) + oracle::laplace_eigenvalue(1, 8, g.hy());
    auto x = solve_helmholtz(plan, (c - nu * lam) * e, sp);
    CHECK(max_abs(x - e) <= 1e-13);
  }

  std::mt19937_64 rng(23);
  for (auto bc : all_kinds) {
    auto gb = build_grid(1, 1, 8, 8, bc);
    auto pb = plan_solver(gb, c, nu);
    for (auto sp : {Staggered::EW, Staggered::NS}) {
      auto rhs = random_field(gb, sp, rng);
      auto x = solve_helmholtz(pb, rhs, sp);
      auto res = c * x - nu * laplacian(x, sp, pb.bank()) - rhs;
      CHECK(norms(res, gb).l2 <= 1e-12 * norms(rhs, gb).l2);

      auto a = random_field(gb, sp, rng);
      auto b = random_field(gb, sp, rng);
      const double ab = inner_product(solve_helmholtz(pb, a, sp), b, gb);
      const double ba = inner_product(a, solve_helmholtz(pb, b, sp), gb);
      CHECK(std::abs(ab - ba) <= 1e-12 * (1 + std::abs(ab)));
    }
  }
}

TEST_CASE("stokes examples for every boundary kind") {
  std::mt19937_64 rng(24);
  const double c = 20.0, nu = 0.1;
  for (auto bc : all_kinds) {
    INFO(to_string(bc.type));
    auto g = build_grid(1.0, 1.0, 16, 12, bc);
    auto plan = plan_solver(g, c, nu);
    const auto& bank = plan.bank();

    auto zero = solve_stokes(plan, VelocityField(g));
    CHECK(max_abs(zero.u) == 0.0);
    CHECK(max_abs(zero.p) == 0.0);

    auto q = zero_mean(random_field(g, Staggered::C, rng));
    auto sq = solve_stokes(plan, gradient(q, bank));
    CHECK(max_abs(sq.u) <= 1e-11);
    CHECK(max_abs(sq.p - q) <= 1e-11);

    auto w = solenoidal(g, rng);
    auto sw = solve_stokes(plan, stokes_operator(w, bank, c, nu));
    CHECK(max_abs(sw.u - w) <= 1e-11 * max_abs(w));
    CHECK(max_abs(sw.p) <= 1e-11 * max_abs(w));

    auto m = random_velocity(g, rng);
    auto s = solve_stokes(plan, m);
    auto res = stokes_operator(s.u, bank, c, nu) + gradient(s.p, bank) - m;
    CHECK(norms(res, g).l2 <= 1e-11 * norms(m, g).l2);
    CHECK(max_abs(divergence(s.u, bank)) <= 1e-10 * max_abs(m));
    CHECK(std::abs(mean(s.p)) <= 1e-13);

    // linearity
    auto m2 = random_velocity(g, rng);
    auto s2 = solve_stokes(plan, m2);
    auto s12 = solve_stokes(plan, 2.0 * m + (-0.5) * m2);
    CHECK(max_abs(s12.u - (2.0 * s.u + (-0.5) * s2.u)) <= 1e-12 * (1 + max_abs(s12.u)));
    CHECK(max_abs(s12.p - (2.0 * s.p + (-0.5) * s2.p)) <= 1e-12 * (1 + max_abs(s12.p)));

    // determinism and batch consistency
    auto again = solve_stokes(plan, m);
    CHECK(again.u == s.u);
    CHECK(again.p == s.p);
    auto batch = plan.solve_batch({m, m2});
    REQUIRE(batch.size() == 2);
    CHECK(max_abs(batch[0].u - s.u) <= 1e-13 * (1 + max_abs(s.u)));
    CHECK(max_abs(batch[1].p - s2.p) <= 1e-13 * (1 + max_abs(s2.p)));

    // global saddle factorization as an independent oracle
    StokesPlan saddle(g, c, nu, StokesBackend::Saddle);
    auto ref = saddle.solve(m);
    CHECK(max_abs(ref.u - s.u) <= 1e-12 * (1 + max_abs(s.u)));
    CHECK(max_abs(ref.p - s.p) <= 1e-12 * (1 + max_abs(s.p)));
  }
}

TEST_CASE("stokes rejects non-finite input") {
  auto g = build_grid(1, 1, 8, 8, BoundaryKind::periodic());
  auto plan = plan_solver(g, 1.0, 1.0);
  VelocityField m(g);
  m.u(2, 2) = std::nan("");
  CHECK_THROWS_AS(plan.solve(m), SolverError);
}

TEST_CASE("plans are movable and shareable across threads") {
  auto g = build_grid(1, 1, 16, 16, BoundaryKind::periodic_x_slip_y());
  StokesPlan plan = plan_solver(g, 4.0, 0.01);
  StokesPlan moved = std::move(plan);
  std::mt19937_64 rng(25);
  std::vector<VelocityField> ms;
  for (int k = 0; k < 8; ++k) ms.push_back(random_velocity(g, rng));
  std::vector<StokesSolution> par(ms.size());
#pragma omp parallel for
  for (int k = 0; k < static_cast<int>(ms.size()); ++k) par[k] = moved.solve(ms[k]);
  for (std::size_t k = 0; k < ms.size(); ++k) {
    auto s = moved.solve(ms[k]);
    CHECK(s.u == par[k].u);
    CHECK(s.p == par[k].p);
  }
}
