// qbgk: command line front end for the Hermite solver, the velocity-grid oracle and the
// benchmark drivers.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "qbgk/config_io.hpp"
#include "qbgk/drivers.hpp"
#include "qbgk/dvm.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/output.hpp"

namespace fs = std::filesystem;
using namespace qbgk;

namespace {

struct Common {
  std::string config_path;
  std::string scenario;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  int threads = -1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config,-c", c.config_path, "key = value configuration file");
  sub->add_option("--scenario,-s", c.scenario, "preset name (ignored with --config)");
  sub->add_option("--out,-o", c.out_dir, "output directory")->capture_default_str();
  sub->add_option("--override", c.overrides, "key=value, applied after the file (repeatable)");
  sub->add_option("--threads,-j", c.threads, "worker thread cap (0: runtime default)");
}

SimulationConfig load(const Common& c, const std::string& fallback) {
  SimulationConfig cfg;
  if (!c.config_path.empty()) {
    cfg = parse_config(c.config_path);
  } else {
    const std::string name = c.scenario.empty() ? fallback : c.scenario;
    if (name.empty()) throw ConfigError("scenario: pass --config or --scenario");
    cfg = preset_config(name);
  }
  for (const std::string& o : c.overrides) apply_override(cfg, o);
  if (c.threads >= 0) cfg.threads = c.threads;
  cfg.validate();
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
  return cfg;
}

std::string path_in(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(',', pos);
    const std::string item = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("grids: not an integer list '" + text + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

int cmd_run(const Common& c, const std::string& solver) {
  const SimulationConfig cfg = load(c, "");
  RunOptions opts;
  opts.output_dir = c.out_dir;
  const RunResult r = solver == "dvm" ? dvm_run(cfg, opts) : run(cfg, opts);
  const Diagnostics& d = r.diagnostics;
  std::printf("%s: %lld steps to t=%.6g (dt=%.4g), %.2f s wall\n", cfg.scenario.c_str(),
              static_cast<long long>(d.step_count), d.final_time, d.dt, d.wall_seconds);
  std::printf("drift: mass %.3e  momentum %.3e  energy %.3e\n", d.mass_drift, d.momentum_drift,
              d.energy_drift);
  std::printf("newton: %lld solves, max %d iterations; condensed %lld; adjusted walls %lld\n",
              static_cast<long long>(d.newton_solves), d.newton_max,
              static_cast<long long>(d.condensation_events), static_cast<long long>(d.adjusted_walls));
  if (cfg.steady_tolerance > 0.0) {
    std::printf("steady: %s (residual %.3e)\n", d.steady ? "yes" : "no", d.last_residual);
  }
  return kExitOk;
}

int cmd_converge(const Common& c, const std::string& grids, int ref_cells,
                 const std::string& ref_scheme, const std::string& ref_recon) {
  const SimulationConfig base = load(c, "ap_periodic");
  SimulationConfig ref = base;
  ref.cells[0] = ref_cells;
  apply_override(ref, "scheme=" + ref_scheme);
  apply_override(ref, "reconstruction=" + ref_recon);
  ref.validate();
  const std::vector<int> n = parse_int_list(grids);
  const ConvergenceTable t = run_convergence_study(base, n, ref);
  const std::string stem = base.scenario + "_" + to_string(base.scheme) + "_convergence";
  write_convergence_csv(path_in(c.out_dir, stem + ".csv"), t);
  write_json(path_in(c.out_dir, stem + ".json"), convergence_json(base, t));
  std::printf("%8s %12s %12s %12s\n", "N", "err_rho", "err_T", "err_fug");
  for (const ConvergenceRow& r : t.rows) {
    std::printf("%8d %12.4e %12.4e %12.4e\n", r.cells, r.err_rho, r.err_temperature, r.err_fugacity);
  }
  std::printf("%8s %12.3f %12.3f %12.3f\n", "order", t.order_rho, t.order_temperature,
              t.order_fugacity);
  return kExitOk;
}

int cmd_newton(const Common& c) {
  const SimulationConfig cfg = load(c, "newton_bench");
  const NewtonBenchResult r = run_newton_bench(cfg);
  char stem[64];
  std::snprintf(stem, sizeof stem, "newton_theta%g%s", cfg.theta0, cfg.warm_start ? "" : "_cold");
  write_newton_csv(path_in(c.out_dir, std::string(stem) + ".csv"), cfg, r);
  write_json(path_in(c.out_dir, std::string(stem) + ".json"), newton_json(cfg, r));
  std::printf("theta0=%g: %zu steps, max %d iterations, mean %.2f, %.0f%% of steps <= 5\n",
              cfg.theta0, r.iterations.size(), r.max_iterations, r.mean_iterations,
              100.0 * r.fraction_at_most_5);
  return kExitOk;
}

int cmd_polylog(const std::string& out_dir, int reps) {
  const PolylogBenchResult r = run_polylog_bench(reps);
  write_polylog_csv(path_in(out_dir, "polylog_bench.csv"), r);
  write_json(path_in(out_dir, "polylog_bench.json"), polylog_json(r));
  std::printf("%5s %14s %14s %14s %12s\n", "s", "abs y<=0", "abs (0,0.9]", "rel (0.9,.999]", "rel y=1");
  for (const PolylogOrderReport& o : r.orders) {
    std::printf("%5.1f %14.3e %14.3e %14.3e %12.3e\n", o.s, o.max_abs_nonpositive,
                o.max_abs_moderate, o.max_rel_near_one, o.rel_at_one);
  }
  std::printf("sweep of %zu evaluations: %.3f ms (median of %d)\n", r.points.size(),
              1e3 * r.sweep_seconds, r.repetitions);
  return kExitOk;
}

int cmd_compare(const Common& c) {
  const SimulationConfig cfg = load(c, "");
  RunOptions opts;
  opts.output_dir = c.out_dir;
  const CompareReport r = compare_solvers(cfg, opts);
  write_compare_csv(path_in(c.out_dir, cfg.scenario + "_compare.csv"), r);
  write_json(path_in(c.out_dir, cfg.scenario + "_compare.json"), compare_json(cfg, r));
  std::printf("relative l2: rho %.3e  u1 %.3e  e0 %.3e  T %.3e\n", r.rel_rho, r.rel_u1, r.rel_e0,
              r.rel_temperature);
  std::printf("cpu per step: hsm %.4g s  dvm %.4g s  (ratio %.1f)\n", r.hsm_cpu_per_step,
              r.dvm_cpu_per_step, r.speedup());
  return kExitOk;
}

int exit_code_for_current() {
  try {
    throw;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FeasibilityError& e) {
    std::cerr << "infeasible state: " << e.what() << "\n";
    return kExitFeasibility;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const DegenerateStateError& e) {
    std::cerr << "degenerate state: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum BGK Hermite spectral solver"};
  app.require_subcommand(1);

  Common run_opts, conv_opts, newton_opts, cmp_opts;
  std::string solver = "hsm";
  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario to its final time");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--solver", solver, "hsm or dvm")
      ->check(CLI::IsMember({"hsm", "dvm"}))
      ->capture_default_str();

  std::string grids = "16,32,64,128", ref_scheme = "imex2", ref_recon = "weno5";
  int ref_cells = 512;
  CLI::App* conv_cmd = app.add_subcommand("converge", "grid convergence study against a fine run");
  add_common(conv_cmd, conv_opts);
  conv_cmd->add_option("--grids", grids, "comma separated cell counts")->capture_default_str();
  conv_cmd->add_option("--reference-cells", ref_cells)->capture_default_str();
  conv_cmd->add_option("--reference-scheme", ref_scheme)->capture_default_str();
  conv_cmd->add_option("--reference-reconstruction", ref_recon)->capture_default_str();

  CLI::App* newton_cmd = app.add_subcommand("newton-bench", "Newton iteration counts, homogeneous cell with source");
  add_common(newton_cmd, newton_opts);

  std::string poly_out = "out";
  int reps = 5;
  CLI::App* poly_cmd = app.add_subcommand("polylog-bench", "polylogarithm accuracy and timing sweep");
  poly_cmd->add_option("--out,-o", poly_out, "output directory")->capture_default_str();
  poly_cmd->add_option("--repetitions", reps, "timed sweeps (median reported)")->capture_default_str();

  CLI::App* cmp_cmd = app.add_subcommand("compare", "Hermite solver against the velocity-grid oracle");
  add_common(cmp_cmd, cmp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_opts, solver);
    if (conv_cmd->parsed()) return cmd_converge(conv_opts, grids, ref_cells, ref_scheme, ref_recon);
    if (newton_cmd->parsed()) return cmd_newton(newton_opts);
    if (poly_cmd->parsed()) return cmd_polylog(poly_out, reps);
    if (cmp_cmd->parsed()) return cmd_compare(cmp_opts);
  } catch (...) {
    return exit_code_for_current();
  }
  return kExitOther;
}
