#include "nsstab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <thread>

#include "json.hpp"

#ifndef NSSTAB_VERSION
#define NSSTAB_VERSION "0.1.0"
#endif

namespace nsstab {

std::string version_string() { return NSSTAB_VERSION; }

int sweep_threads() {
  if (const char* env = std::getenv("NSSTAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string snapshot_name(long n) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshot_%06ld.txt", n);
  return buf;
}

json config_echo(const RunConfig& cfg) {
  json echo = json::object();
  for (const auto& [key, e] : cfg.entries) echo[key] = {{"value", e.value}, {"source", e.source}};
  return echo;
}

void write_manifest(const RunConfig& cfg, const ProblemSpec* prob, const GridSpec* grid,
                    const RunArtifacts& a, double div_inf_initial) {
  json m;
  m["status"] = a.ok ? "OK" : "FAILED";
  m["version"] = version_string();
  if (!a.error.empty()) m["error"] = a.error;
  m["problem"] = prob ? prob->name : cfg.problem;
  m["scheme"] = to_string(cfg.scheme);
  if (grid) {
    m["grid"] = {{"Nx", grid->nx()}, {"Ny", grid->ny()}, {"Lx", grid->lx()}, {"Ly", grid->ly()},
                 {"hx", grid->hx()}, {"hy", grid->hy()}, {"bc", to_string(grid->bc().type)},
                 {"lid_speed", grid->bc().lid_speed}};
  }
  if (prob) m["nu"] = prob->nu;
  if (cfg.controller) {
    m["tau_policy"] = {{"kind", "controller"}, {"tau_max", cfg.controller->tau_max},
                       {"tau_min", cfg.controller->tau_min}, {"eta", cfg.controller->eta}};
  } else {
    m["tau_policy"] = {{"kind", "fixed"}, {"tau", cfg.tau.value_or(0.0)}};
  }
  if (prob && prob->steady) {
    m["stopping"] = {{"kind", "steady"}, {"tol", prob->steady->tol}, {"max_steps", prob->steady->max_steps},
                     {"reached", a.steady_reached}};
  } else if (prob) {
    m["stopping"] = {{"kind", "final_time"}, {"T", prob->t_final}};
  }
  m["tolerances"] = {{"eps_den", grid ? cfg.tol.den(*grid) : cfg.tol.eps_den},
                     {"eps_det_scale", cfg.tol.eps_det_scale}};
  m["steps"] = a.steps;
  m["t_final"] = a.t_final;
  m["wall_clock_seconds"] = a.wall_seconds;
  m["div_inf_initial"] = div_inf_initial;
  m["div_inf_max"] = a.div_inf_max;
  m["min_abs_det_A"] = a.min_abs_det_A;
  m["max_identity_residual"] = a.max_identity_residual;
  m["energy_non_increasing"] = a.energy_non_increasing;
  m["max_energy_increase"] = a.max_energy_increase;
  m["plan_builds"] = a.plan_builds;
  m["config"] = config_echo(cfg);
  m["overrides"] = cfg.overrides;
  json files = json::array();
  for (const auto& s : a.snapshots) files.push_back(s.filename().string());
  m["snapshots"] = files;
  std::ofstream out(a.manifest);
  out << m.dump(2) << "\n";
}

}  // namespace

RunArtifacts run_simulation(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunArtifacts a;
  a.dir = cfg.out_dir;
  std::error_code ec;
  fs::create_directories(a.dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + a.dir.string() + ": " + ec.message());
  a.timeseries = a.dir / "timeseries.csv";
  a.manifest = a.dir / "manifest.json";

  const ProblemSpec prob = make_problem(cfg);
  const GridSpec grid = make_grid(cfg, prob);
  const bool steady = prob.steady.has_value();
  const double T = steady ? std::numeric_limits<double>::infinity() : prob.t_final;
  const bool track_identity = !prob.forcing && grid.bc().lid_speed == 0.0;
  const bool hat = cfg.scheme == SchemeKind::BDF2 || cfg.scheme == SchemeKind::VBDF2;
  double div_inf_initial = 0.0;
  a.min_abs_det_A = std::numeric_limits<double>::infinity();

  TimeseriesWriter writer(a.timeseries);
  try {
    const Integrator integ(prob, grid, cfg.scheme, cfg.tol);
    const StencilBank& bank = integ.bank();
    SimulationState state = integ.initial_state();
    const double e0 = kinetic_energy(state.Un, grid);
    div_inf_initial = divergence_inf(state.Un, bank);

    EnergyRecord r0;
    r0.E = e0;
    if (hat) r0.E_hat = e0;
    r0.dissipation = dissipation(state.Un, bank, prob.nu);
    r0.div_inf = div_inf_initial;
    writer.write(r0);

    std::size_t next_time = 0;
    auto want_snapshot = [&](const SimulationState& s) {
      bool want = cfg.snapshot_stride > 0 && s.n % cfg.snapshot_stride == 0;
      while (next_time < cfg.snapshot_times.size() &&
             s.t >= cfg.snapshot_times[next_time] - 1e-12 * std::max(1.0, s.t)) {
        want = true;
        ++next_time;
      }
      return want;
    };
    auto snapshot = [&](const SimulationState& s, const std::string& name) {
      const fs::path p = a.dir / name;
      write_snapshot(s.Un, s.Pn, grid, s.t, p);
      a.snapshots.push_back(p);
    };
    if (want_snapshot(state)) snapshot(state, snapshot_name(0));

    const long uniform_steps =
        cfg.tau && !steady ? std::max(1L, static_cast<long>(std::ceil(T / *cfg.tau - 1e-9))) : 0;
    double e_n = e0;
    double e_nm1 = e0;
    double monitor = e0;

    while (true) {
      if (steady) {
        if (state.n >= prob.steady->max_steps) break;
      } else if (cfg.tau) {
        if (state.n >= uniform_steps) break;
      } else if (state.t >= T * (1.0 - 1e-12)) {
        break;
      }
      double tau = 0.0;
      if (cfg.tau) {
        tau = *cfg.tau;
      } else {
        tau = state.n == 0 ? cfg.controller->tau_min : next_tau(e_n, e_nm1, state.tau_n, *cfg.controller);
        if (state.t + tau > T) tau = T - state.t;
      }
      StepResult res = integ.step(state, tau);

      EnergyRecord rec;
      rec.n = res.state.n;
      rec.t = res.state.t;
      rec.tau = tau;
      rec.E = kinetic_energy(res.state.Un, grid);
      if (hat) rec.E_hat = bdf2_energy(res.state.Un, *res.state.Unm1, grid);
      rec.dissipation = dissipation(res.U_eval, bank, prob.nu);
      if (track_identity) {
        rec.identity_residual =
            energy_identity_residual(res.coeffs.applied, state, res.state, tau, prob, bank, e0);
        if (rec.identity_residual) a.max_identity_residual = std::max(a.max_identity_residual, *rec.identity_residual);
      }
      rec.div_inf = divergence_inf(res.U_eval, bank);
      rec.det_A = res.det_A;
      writer.write(rec);

      a.div_inf_max = std::max(a.div_inf_max, rec.div_inf);
      a.min_abs_det_A = std::min(a.min_abs_det_A, std::abs(res.det_A));
      const double mon = hat ? *rec.E_hat : rec.E;
      a.max_energy_increase = state.n == 0 ? mon - monitor : std::max(a.max_energy_increase, mon - monitor);
      if (mon > monitor) a.energy_non_increasing = false;
      monitor = mon;
      e_nm1 = e_n;
      e_n = rec.E;

      if (steady && prob.steady->reached(res.state.Un, state.Un)) a.steady_reached = true;
      state = std::move(res.state);
      if (want_snapshot(state)) snapshot(state, snapshot_name(state.n));
      if (a.steady_reached) break;
    }
    a.plan_builds = integ.cache().builds();
    a.steps = state.n;
    a.t_final = state.t;
    snapshot(state, "final.txt");
    a.final_state = std::move(state);
    a.ok = !steady || a.steady_reached;
    if (!a.ok) {
      a.error = "steady state not reached within " + std::to_string(prob.steady->max_steps) + " steps";
    }
  } catch (const std::exception& e) {
    a.ok = false;
    a.error = e.what();
  }
  writer.flush();
  if (a.min_abs_det_A == std::numeric_limits<double>::infinity()) a.min_abs_det_A = 0.0;
  a.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(cfg, &prob, &grid, a, div_inf_initial);
  return a;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg, std::vector<double> taus) {
  if (taus.empty()) throw ConfigError("converge: need at least one tau");
  std::sort(taus.begin(), taus.end(), std::greater<>());
  if (is_variable_step(cfg.scheme)) throw ConfigError("converge: needs a fixed-step scheme");
  const ProblemSpec prob = make_problem(cfg);
  if (!prob.exact) throw ConfigError("converge: problem '" + prob.name + "' has no exact solution");
  if (prob.steady) throw ConfigError("converge: needs a final time, not a steady-state run");
  const GridSpec grid = make_grid(cfg, prob);

  std::vector<ConvergenceRow> rows(taus.size());
  auto member = [&](std::size_t k) {
    RunConfig c = cfg;
    c.tau = taus[k];
    c.controller.reset();
    c.snapshot_stride = 0;
    c.snapshot_times.clear();
    c.out_dir = cfg.out_dir / ("tau_" + std::to_string(k));
    RunArtifacts a = run_simulation(c);
    if (!a.ok) throw SolverError("converge: run with tau = " + format_double(taus[k]) + " failed: " + a.error);
    const double t = a.final_state.t;
    const double tp = is_crank_nicolson(cfg.scheme) ? t - 0.5 * taus[k] : t;
    rows[k].tau = taus[k];
    rows[k].err = error_norms(a.final_state.Un, a.final_state.Pn, prob, t, grid, tp);
  };
  const std::size_t width = static_cast<std::size_t>(sweep_threads());
  for (std::size_t begin = 0; begin < taus.size(); begin += width) {
    std::vector<std::future<void>> jobs;
    for (std::size_t k = begin; k < std::min(taus.size(), begin + width); ++k) {
      jobs.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, member, k));
    }
    for (auto& j : jobs) j.get();
  }

  if (rows.size() >= 2) {
    std::vector<double> eu, ep;
    for (const auto& r : rows) {
      eu.push_back(r.err.u_linf);
      ep.push_back(r.err.p_linf);
    }
    const auto ou = observed_order(eu, taus);
    const auto op = observed_order(ep, taus);
    for (std::size_t k = 0; k < ou.size(); ++k) {
      rows[k + 1].order_u = ou[k];
      rows[k + 1].order_p = op[k];
    }
  }

  std::ofstream out(cfg.out_dir / "convergence.csv");
  out << "tau,u_linf,u_l2,p_linf,p_l2,order_u,order_p\n";
  for (const auto& r : rows) {
    out << format_double(r.tau) << ',' << format_double(r.err.u_linf) << ','
        << format_double(r.err.u_l2) << ',' << format_double(r.err.p_linf) << ','
        << format_double(r.err.p_l2) << ',' << (r.order_u ? format_double(*r.order_u) : "") << ','
        << (r.order_p ? format_double(*r.order_p) : "") << '\n';
  }
  return rows;
}

}  // namespace nsstab
