#include <cmath>

#include "doctest.h"
#include "nsstab/adaptive.hpp"
#include "nsstab/diagnostics.hpp"

using namespace nsstab;

TEST_CASE("next_tau examples") {
  StepController ctrl;
  CHECK(next_tau(0.3, 0.3, 0.05, ctrl) == ctrl.tau_max);
  StepController flat{0.1, 1.0 / 120, 0.0};
  CHECK(next_tau(0.1, 0.5, 0.01, flat) == 0.1);
  // (E_n - E_{n-1}) / tau_n = -0.01
  const double tau = next_tau(0.25 - 1e-4, 0.25, 0.01, ctrl);
  CHECK(tau == doctest::Approx(0.1 / std::sqrt(41.0)).epsilon(1e-12));
  CHECK(tau == doctest::Approx(1.5617e-2).epsilon(1e-4));
  CHECK(next_tau(0.0, 1.0, 0.01, ctrl) == ctrl.tau_min);
  CHECK_THROWS_AS(next_tau(1, 1, 0.0, ctrl), ValidationError);
}

TEST_CASE("controller bounds and monotonicity") {
  StepController ctrl;
  double prev = ctrl.tau_max;
  for (double rate = 0.0; rate < 1.0; rate += 1e-3) {
    const double t = next_tau(-rate * 0.02, 0.0, 0.02, ctrl);
    CHECK(t >= ctrl.tau_min);
    CHECK(t <= ctrl.tau_max);
    CHECK(t <= prev);
    prev = t;
  }
  CHECK_THROWS_AS((StepController{0.01, 0.1, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((StepController{0.1, 0.01, -1.0}.validate()), ValidationError);
  CHECK_NOTHROW(StepController{}.validate());
}

TEST_CASE("variable history ratio") {
  VariableHistory h{0.02, 0.01};
  CHECK(h.ratio() == 2.0);
}

TEST_CASE("constant steps reproduce the uniform schemes") {
  auto tg = taylor_green(0.001);
  auto g = build_grid(1, 1, 32, 32, BoundaryKind::periodic());
  const double tau = 0.05;
  for (auto [uni, var] : {std::pair{SchemeKind::CN2, SchemeKind::VCN2}, {SchemeKind::BDF2, SchemeKind::VBDF2}}) {
    Integrator iu(tg, g, uni), iv(tg, g, var);
    auto su = iu.step(iu.initial_state(), tau).state;
    auto sv = iv.step(iv.initial_state(), tau).state;
    for (int n = 0; n < 10; ++n) {
      su = iu.step(su, tau).state;
      sv = step_variable(sv, tau, iv).state;
      CHECK(max_abs(su.Un - sv.Un) <= 1e-14);
    }
  }
}

TEST_CASE("step_variable preconditions") {
  auto tg = taylor_green();
  auto g = build_grid(1, 1, 8, 8, BoundaryKind::periodic());
  Integrator cn(tg, g, SchemeKind::CN2);
  auto s = cn.step(cn.initial_state(), 0.1).state;
  CHECK_THROWS_AS(step_variable(s, 0.1, cn), ValidationError);
  Integrator v(tg, g, SchemeKind::VCN2);
  CHECK_THROWS_AS(step_variable(v.initial_state(), 0.1, v), ValidationError);
}

TEST_CASE("zero state under a varying step sequence") {
  ProblemSpec z = taylor_green();
  z.u0 = [](double, double, double) { return 0.0; };
  z.v0 = z.u0;
  auto g = build_grid(1, 1, 8, 8, BoundaryKind::periodic());
  for (auto sch : {SchemeKind::VCN2, SchemeKind::VBDF2}) {
    Integrator it(z, g, sch);
    auto s = it.step(it.initial_state(), 0.01).state;
    for (double tau : {0.02, 0.005, 0.1, 0.03}) s = step_variable(s, tau, it).state;
    CHECK(max_abs(s.Un) == 0.0);
  }
}

TEST_CASE("adaptive taylor-green run dissipates energy") {
  auto tg = taylor_green(0.001);
  auto g = build_grid(1, 1, 32, 32, BoundaryKind::periodic());
  StepController ctrl;
  for (auto sch : {SchemeKind::VCN2, SchemeKind::VBDF2}) {
    Integrator it(tg, g, sch);
    auto s0 = it.initial_state();
    double e_prev = kinetic_energy(s0.Un, g);
    auto s = it.step(s0, ctrl.tau_min).state;
    double e = kinetic_energy(s.Un, g);
    CHECK(e <= e_prev);
    double t = s.t;
    int steps = 1;
    while (t < 10.0) {
      const double tau = next_tau(e, e_prev, s.tau_n, ctrl);
      CHECK(tau >= ctrl.tau_min);
      CHECK(tau <= ctrl.tau_max);
      s = step_variable(s, tau, it).state;
      e_prev = e;
      e = kinetic_energy(s.Un, g);
      CHECK(e <= e_prev);
      t = s.t;
      ++steps;
    }
    CHECK(steps < 10.0 / ctrl.tau_min);
    CHECK(it.cache().builds() < steps);
  }
}
