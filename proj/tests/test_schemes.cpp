#include <cmath>
#include <random>

#include "doctest.h"
#include "nsstab/diagnostics.hpp"
#include "nsstab/properties.hpp"
#include "nsstab/schemes.hpp"

using namespace nsstab;

namespace {

double norm2(const VelocityField& u, const GridSpec& g) { return inner_product(u, u, g); }

}  // namespace

TEST_CASE("scheme names") {
  for (auto s : {SchemeKind::CN1, SchemeKind::CN2, SchemeKind::BDF1, SchemeKind::BDF2,
                 SchemeKind::VCN2, SchemeKind::VBDF2})
    CHECK(scheme_from_string(to_string(s)) == s);
  CHECK(scheme_from_string("vbdf2") == SchemeKind::VBDF2);
  CHECK(scheme_from_string("Cn2") == SchemeKind::CN2);
  CHECK_THROWS_AS(scheme_from_string("rk4"), ValidationError);
  CHECK(startup_scheme(SchemeKind::VCN2) == SchemeKind::CN1);
  CHECK(startup_scheme(SchemeKind::BDF2) == SchemeKind::BDF1);
  CHECK_FALSE(is_second_order(SchemeKind::BDF1));
  CHECK(is_variable_step(SchemeKind::VBDF2));
}

TEST_CASE("scheme coefficients") {
  const double tau = 0.04;
  CHECK(scheme_coefficients(SchemeKind::CN1, tau).c == 2.0 / tau);
  CHECK(scheme_coefficients(SchemeKind::CN2, tau).c == 2.0 / tau);
  CHECK(scheme_coefficients(SchemeKind::BDF1, tau).c == 1.0 / tau);
  auto b2 = scheme_coefficients(SchemeKind::BDF2, tau);
  CHECK(b2.c == doctest::Approx(1.5 / tau).epsilon(1e-15));
  CHECK(b2.mn == doctest::Approx(2.0 / tau).epsilon(1e-15));
  CHECK(b2.mnm1 == doctest::Approx(-0.5 / tau).epsilon(1e-15));
  CHECK(b2.en == 2.0);
  CHECK(b2.enm1 == -1.0);
  auto c2 = scheme_coefficients(SchemeKind::CN2, tau);
  CHECK(c2.en == 1.5);
  CHECK(c2.enm1 == -0.5);
  CHECK(c2.forcing_dt == tau / 2);
  CHECK(b2.forcing_dt == tau);

  auto v = scheme_coefficients(SchemeKind::VCN2, tau, 0.5);
  CHECK(v.en == 1.25);
  CHECK(v.enm1 == -0.25);
  auto vb = scheme_coefficients(SchemeKind::VBDF2, tau, 2.0);
  CHECK(vb.c == doctest::Approx(5.0 / (3.0 * tau)));
  CHECK(vb.mn == doctest::Approx((5.0 + 4.0) / (3.0 * tau)));
  CHECK(vb.mnm1 == doctest::Approx(-4.0 / (3.0 * tau)));

  CHECK_THROWS_AS(scheme_coefficients(SchemeKind::CN2, tau, 2.0), ValidationError);
  CHECK_THROWS_AS(scheme_coefficients(SchemeKind::CN1, 0.0), ValidationError);
  CHECK_THROWS_AS(scheme_coefficients(SchemeKind::VCN2, tau, -1.0), ValidationError);
}

TEST_CASE("solve_2x2 examples") {
  AlphaBetaSystem id;
  id.A = {{{1, 0}, {0, 1}}};
  id.b = {3, -2};
  auto x = solve_2x2(id);
  CHECK(x[0] == 3.0);
  CHECK(x[1] == -2.0);

  AlphaBetaSystem s;
  s.A = {{{2, 1}, {1, 2}}};
  s.b = {3, 3};
  auto y = solve_2x2(s);
  CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-15));

  AlphaBetaSystem sing;
  sing.A = {{{1, 1}, {1, 1}}};
  sing.b = {1, 5};
  CHECK_THROWS_AS(solve_2x2(sing), SolverError);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int k = 0; k < 100; ++k) {
    AlphaBetaSystem r;
    r.A = {{{1 + d(rng), d(rng)}, {d(rng), 1 + d(rng)}}};
    r.b = {d(rng), d(rng)};
    if (std::abs(r.det()) < 1e-3) continue;
    auto z = solve_2x2(r);
    for (int i = 0; i < 2; ++i) {
      const double res = r.A[i][0] * z[0] + r.A[i][1] * z[1] - r.b[i];
      CHECK(std::abs(res) <= 1e-14 * (1 + std::abs(z[0]) + std::abs(z[1])) *
                                 (std::abs(r.A[i][0]) + std::abs(r.A[i][1]) + 1));
    }
  }
}

TEST_CASE("assemble_alpha_beta examples") {
  std::mt19937_64 rng(32);
  auto g = build_grid(1, 1, 6, 6, BoundaryKind::periodic());
  StencilBank bank(g);
  auto u1 = random_velocity(g, rng);
  auto u2 = random_velocity(g, rng);
  auto u3 = random_velocity(g, rng);

  auto zero = assemble_alpha_beta(VelocityField(g), u1, u2, u3, bank);
  CHECK(zero.A[0][0] == 1.0);
  CHECK(zero.A[0][1] == 0.0);
  CHECK(zero.A[1][0] == 0.0);
  CHECK(zero.A[1][1] == 1.0);
  CHECK(zero.b[0] == 0.0);
  CHECK(zero.b[1] == 0.0);

  auto ubar = random_velocity(g, rng);
  auto parts = convection_parts(ubar, bank);
  auto s0 = assemble_alpha_beta(ubar, VelocityField(g), VelocityField(g), u3, bank);
  CHECK(s0.A[0][0] == 1.0);
  CHECK(s0.A[1][1] == 1.0);
  CHECK(s0.b[0] == doctest::Approx(inner_product(ubar, u3, g)).epsilon(1e-14));
  CHECK(s0.b[1] == doctest::Approx(inner_product(parts.G, u3, g)).epsilon(1e-14));

  auto s = assemble_alpha_beta(ubar, u1, u2, u3, bank);
  CHECK(std::abs(s.A[0][0] - (1 - inner_product(ubar, u1, g))) <= 1e-14);
  CHECK(std::abs(s.A[0][1] + inner_product(ubar, u2, g)) <= 1e-14);
  CHECK(std::abs(s.A[1][0] + inner_product(parts.G, u1, g)) <= 1e-14);
  CHECK(std::abs(s.A[1][1] - (1 - inner_product(parts.G, u2, g))) <= 1e-14);
}

TEST_CASE("init_state") {
  auto tg = taylor_green();
  auto g32 = build_grid(1, 1, 32, 32, BoundaryKind::periodic());
  auto s = init_state(tg, g32, SchemeKind::CN1, 0.01);
  CHECK(s.n == 0);
  CHECK(max_abs(divergence(s.Un, StencilBank(g32))) <= 1e-12);

  auto u0 = initial_velocity(tg, g32);
  auto s2 = init_state(tg, g32, SchemeKind::CN2, 1e-2);
  REQUIRE(s2.Unm1);
  CHECK(*s2.Unm1 == u0);
  CHECK(s2.n == 1);
  CHECK(s2.t == 1e-2);
  SimulationState base;
  base.scheme = SchemeKind::CN1;
  base.Un = u0;
  base.Pn = Field2D(g32);
  auto plan = plan_solver(g32, 2.0 / 1e-2, tg.nu);
  auto cn1 = step(base, 1e-2, plan, tg);
  CHECK(cn1.Un == s2.Un);
}

TEST_CASE("zero state is a fixed point") {
  ProblemSpec z = taylor_green();
  z.u0 = [](double, double, double) { return 0.0; };
  z.v0 = z.u0;
  for (auto bc : {BoundaryKind::periodic(), BoundaryKind::dirichlet(), BoundaryKind::periodic_x_slip_y()}) {
    z.bc = bc;
    auto g = build_grid(1, 1, 8, 8, bc);
    for (auto sch : {SchemeKind::CN1, SchemeKind::CN2, SchemeKind::BDF1, SchemeKind::BDF2,
                     SchemeKind::VCN2, SchemeKind::VBDF2}) {
      Integrator it(z, g, sch);
      auto s = it.initial_state();
      for (int n = 0; n < 3; ++n) {
        auto r = it.step(s, 0.1 / (n + 1));
        CHECK(r.alpha == 0.0);
        CHECK(r.beta == 0.0);
        s = r.state;
      }
      CHECK(max_abs(s.Un) == 0.0);
    }
  }
}

TEST_CASE("taylor-green single-step energy laws") {
  auto tg = taylor_green(0.001);
  auto g = build_grid(1, 1, 64, 64, BoundaryKind::periodic());
  StencilBank bank(g);
  const double tau = 1e-2;

  SUBCASE("CN2") {
    Integrator it(tg, g, SchemeKind::CN2);
    auto s = it.step(it.initial_state(), tau).state;
    for (int n = 0; n < 3; ++n) {
      auto r = it.step(s, tau);
      const auto& half = r.U_eval;
      const double lhs = (0.5 * norm2(r.state.Un, g) - 0.5 * norm2(s.Un, g)) / tau;
      const double rhs = tg.nu * inner_product(laplacian(half, bank), half, g);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
      CHECK(max_abs(divergence(half, bank)) <= 1e-10);
      s = r.state;
    }
  }
  SUBCASE("BDF2") {
    Integrator it(tg, g, SchemeKind::BDF2);
    auto s = it.step(it.initial_state(), tau).state;
    for (int n = 0; n < 3; ++n) {
      auto r = it.step(s, tau);
      const auto& u1 = r.state.Un;
      const double ehat_new = 0.25 * (norm2(u1, g) + norm2(2.0 * u1 - s.Un, g));
      const double ehat_old = 0.25 * (norm2(s.Un, g) + norm2(2.0 * s.Un - *s.Unm1, g));
      VelocityField d2 = u1 - 2.0 * s.Un + *s.Unm1;
      const double rhs = tau * tg.nu * inner_product(laplacian(u1, bank), u1, g) - 0.25 * norm2(d2, g);
      CHECK(std::abs((ehat_new - ehat_old) - rhs) <= 1e-12 * std::abs(rhs));
      CHECK(max_abs(divergence(u1, bank)) <= 1e-10);
      s = r.state;
    }
  }
}

TEST_CASE("step checks the plan constant") {
  auto tg = taylor_green();
  auto g = build_grid(1, 1, 8, 8, BoundaryKind::periodic());
  Integrator it(tg, g, SchemeKind::BDF1);
  auto plan = plan_solver(g, 2.0 / 0.1, tg.nu);
  CHECK_THROWS_AS(step(it.initial_state(), 0.1, plan, tg), ValidationError);
  auto other = plan_solver(build_grid(1, 1, 8, 9, BoundaryKind::periodic()), 10.0, tg.nu);
  CHECK_THROWS_AS(step(it.initial_state(), 0.1, other, tg), ValidationError);
}

TEST_CASE("singular alpha/beta systems abort the step") {
  auto tg = taylor_green();
  auto g = build_grid(1, 1, 8, 8, BoundaryKind::periodic());
  Tolerances tol;
  tol.eps_det_scale = 10.0;
  Integrator it(tg, g, SchemeKind::CN1, tol);
  CHECK_THROWS_AS(it.step(it.initial_state(), 0.1), SolverError);
}

TEST_CASE("plan cache reuses plans") {
  auto g = build_grid(1, 1, 8, 8, BoundaryKind::periodic());
  auto cache = std::make_shared<PlanCache>(g, 0.01, 2);
  auto a = cache->get(20.0);
  auto b = cache->get(20.0 * (1 + 1e-14));
  CHECK(a == b);
  CHECK(cache->builds() == 1);
  auto c = cache->get(30.0);
  CHECK(c != a);
  cache->get(40.0);
  CHECK(cache->size() == 2);
  CHECK(cache->builds() == 3);
  CHECK_THROWS_AS(Integrator(taylor_green(0.5), g, SchemeKind::CN1, {}, cache), ValidationError);
}

TEST_CASE("forced dirichlet and slip steps stay finite and solenoidal") {
  auto mf = manufactured_flow();
  for (auto bc : {BoundaryKind::dirichlet(), BoundaryKind::periodic_x_slip_y()}) {
    mf.bc = bc;
    auto g = build_grid(1, 1, 16, 16, bc);
    StencilBank bank(g);
    Integrator it(mf, g, SchemeKind::BDF2);
    auto s = it.initial_state();
    for (int n = 0; n < 4; ++n) {
      auto r = it.step(s, 0.05);
      CHECK(r.state.Un.all_finite());
      CHECK(max_abs(divergence(r.state.Un, bank)) <= 1e-10);
      s = r.state;
    }
  }
}

TEST_CASE("lid-driven cavity steps") {
  auto cav = lid_driven_cavity(100);
  auto g = problem_grid(cav, 16, 16);
  StencilBank bank(g);
  Integrator it(cav, g, SchemeKind::BDF2);
  auto s = it.initial_state();
  for (int n = 0; n < 10; ++n) s = it.step(s, 1e-2).state;
  double umax_top = 0.0;
  for (int i = 1; i < 16; ++i) umax_top = std::max(umax_top, s.Un.u(i, 15));
  CHECK(umax_top > 0.1);
  CHECK(umax_top < 1.0);
  CHECK(max_abs(divergence(s.Un, bank)) <= 1e-10);
}
