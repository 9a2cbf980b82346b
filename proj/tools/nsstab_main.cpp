// nsstab command-line driver.
//
//   nsstab run <config> [--out DIR] [--set section.key=value ...]
//   nsstab converge <config> --taus 0.2,0.1,0.05 [--out DIR] [--set ...]
//   nsstab properties [--trials N] [--seed S]
//   nsstab cavity --re 100 [--n 64] [--tau 1e-3] [--out DIR] [--set ...]
//   nsstab kh [--paper-scale] [--n 128] [--out DIR] [--set ...]
//
// Exit codes: 0 success, 2 configuration error, 3 solver error or steady
// state not reached.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "nsstab/properties.hpp"
#include "nsstab/runner.hpp"

namespace {

using namespace nsstab;

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

std::string cavity_preset() {
  return "[problem]\nname = cavity\nRe = 100\nsteady_tol = 1e-6\n"
         "[grid]\nNx = 64\nNy = 64\n"
         "[scheme]\nscheme = bdf2\ntau = 1e-3\n"
         "[output]\ndir = out/cavity\n";
}

std::string kh_preset() {
  return "[problem]\nname = kelvin_helmholtz\n"
         "[grid]\nNx = 128\nNy = 128\n"
         "[scheme]\nscheme = cn2\ntau = 1/600\n"
         "[output]\ndir = out/kh\nsnapshot_times = 0, 0.357142857142857, 0.714285714285714, 1.07142857142857, 1.42857142857143, 1.78571428571429\n";
}

int report(const RunArtifacts& a) {
  std::printf("%s: %ld steps to t = %.6g in %.2f s, div_inf_max = %.3e, min|det A| = %.6g\n",
              a.ok ? "OK" : "FAILED", a.steps, a.t_final, a.wall_seconds, a.div_inf_max,
              a.min_abs_det_A);
  std::printf("outputs in %s\n", a.dir.string().c_str());
  if (!a.ok) {
    std::fprintf(stderr, "error: %s\n", a.error.c_str());
    return kSolverError;
  }
  return 0;
}

std::vector<std::string> with_out(std::vector<std::string> sets, const std::string& out) {
  if (!out.empty()) sets.push_back("output.dir=" + out);
  return sets;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-stable incompressible Navier-Stokes solver on a staggered grid"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;

  auto* run = app.add_subcommand("run", "run one configuration");
  run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (overrides output.dir)");
  run->add_option("--set", sets, "override section.key=value");

  std::vector<double> taus;
  auto* conv = app.add_subcommand("converge", "temporal convergence sweep");
  conv->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
  conv->add_option("--taus", taus, "step sizes")->required()->delimiter(',');
  conv->add_option("--out", out_dir, "output directory");
  conv->add_option("--set", sets, "override section.key=value");

  long trials = 1000;
  std::uint64_t seed = 12345;
  auto* props = app.add_subcommand("properties", "randomized operator identity suite");
  props->add_option("--trials", trials, "trials per boundary kind");
  props->add_option("--seed", seed, "random seed");

  double re = 100.0;
  int n = 0;
  double tau = 0.0;
  auto* cav = app.add_subcommand("cavity", "lid-driven cavity preset");
  cav->add_option("--re", re, "Reynolds number")->required();
  cav->add_option("--n", n, "cells per direction (default 64)");
  cav->add_option("--tau", tau, "time step (default 1e-3)");
  cav->add_option("--out", out_dir, "output directory");
  cav->add_option("--set", sets, "override section.key=value");

  bool paper_scale = false;
  auto* kh = app.add_subcommand("kh", "Kelvin-Helmholtz preset");
  kh->add_flag("--paper-scale", paper_scale, "T = 200 time units");
  kh->add_option("--n", n, "cells per direction (default 128)");
  kh->add_option("--tau", tau, "time step (default 1/600)");
  kh->add_option("--out", out_dir, "output directory");
  kh->add_option("--set", sets, "override section.key=value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return report(run_simulation(load_config(config_path, with_out(sets, out_dir))));
    if (*conv) {
      const RunConfig cfg = load_config(config_path, with_out(sets, out_dir));
      const auto rows = convergence_study(cfg, taus);
      std::printf("%-12s %-12s %-12s %-8s %-8s\n", "tau", "u_linf", "p_linf", "order_u", "order_p");
      for (const auto& r : rows) {
        std::printf("%-12.6g %-12.4e %-12.4e %-8s %-8s\n", r.tau, r.err.u_linf, r.err.p_linf,
                    r.order_u ? std::to_string(*r.order_u).substr(0, 6).c_str() : "",
                    r.order_p ? std::to_string(*r.order_p).substr(0, 6).c_str() : "");
      }
      std::printf("table written to %s\n", (cfg.out_dir / "convergence.csv").string().c_str());
      return 0;
    }
    if (*props) {
      PropertyOptions opts;
      opts.trials = trials;
      opts.seed = seed;
      bool all = true;
      std::printf("%-16s %-16s %8s %12s %10s  %s\n", "property", "boundary", "trials", "defect", "tol", "result");
      for (const auto& r : run_property_suite(opts)) {
        std::printf("%-16s %-16s %8ld %12.3e %10.0e  %s\n", r.name.c_str(), to_string(r.bc).c_str(),
                    r.trials, r.defect, r.tol, r.pass ? "PASS" : "FAIL");
        all = all && r.pass;
      }
      return all ? 0 : 1;
    }
    if (*cav) {
      std::vector<std::string> s = {"problem.Re=" + std::to_string(re)};
      if (n > 0) {
        s.push_back("grid.Nx=" + std::to_string(n));
        s.push_back("grid.Ny=" + std::to_string(n));
      }
      if (tau > 0) s.push_back("scheme.tau=" + format_double(tau));
      s.insert(s.end(), sets.begin(), sets.end());
      return report(run_simulation(parse_config(cavity_preset(), with_out(s, out_dir))));
    }
    if (*kh) {
      std::vector<std::string> s;
      if (paper_scale) s.push_back("problem.paper_scale=true");
      if (n > 0) {
        s.push_back("grid.Nx=" + std::to_string(n));
        s.push_back("grid.Ny=" + std::to_string(n));
      }
      if (tau > 0) s.push_back("scheme.tau=" + format_double(tau));
      s.insert(s.end(), sets.begin(), sets.end());
      return report(run_simulation(parse_config(kh_preset(), with_out(s, out_dir))));
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolverError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSolverError;
  }
  return 0;
}
