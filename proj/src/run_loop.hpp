#pragma once

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <type_traits>

#include "qbgk/output.hpp"

namespace qbgk::detail {

// Time loop shared by the Hermite and discrete-velocity solvers.
template <class S>
RunResult run_loop(S& solver, const SimulationConfig& cfg, const RunOptions& opts,
                   std::chrono::steady_clock::time_point wall0, std::clock_t cpu0) {
  RunResult res;
  Diagnostics& diag = res.diagnostics;
  diag.initial = solver.totals();
  diag.dt = solver.nominal_dt();
  const bool write = !opts.output_dir.empty();
  if (write) std::filesystem::create_directories(opts.output_dir);
  auto snapshot = [&](const Fields& f) {
    if (!write) return;
    const std::string name = snapshot_name(cfg.scenario, solver.time(), opts.prefix);
    write_snapshot_csv((std::filesystem::path(opts.output_dir) / name).string(), f);
    diag.snapshots.push_back(name);
  };

  const double tiny = 1e-12 * std::max(1.0, cfg.t_end);
  const double interval = cfg.output_interval > 0.0 ? cfg.output_interval : cfg.t_end;
  double next_out = std::min(interval, cfg.t_end);
  bool wrote_last = false;
  const std::clock_t loop0 = std::clock();
  while (solver.time() < cfg.t_end - tiny && solver.step_count() < cfg.max_steps) {
    double dt = solver.nominal_dt();
    if (solver.time() + dt > next_out - tiny) dt = next_out - solver.time();
    const StepRecord rec = solver.advance(dt);
    accumulate_step(diag, rec, opts.keep_steps);
    if constexpr (std::is_same_v<S, Solver>) {
      if (opts.on_step) opts.on_step(solver, rec);
    }
    wrote_last = false;
    if (solver.time() >= next_out - tiny) {
      snapshot(solver.fields());
      wrote_last = true;
      next_out = std::min(next_out + interval, cfg.t_end);
    }
    if (cfg.steady_tolerance > 0.0 && rec.residual < cfg.steady_tolerance) {
      diag.steady = true;
      break;
    }
  }
  diag.loop_cpu_seconds = double(std::clock() - loop0) / CLOCKS_PER_SEC;
  res.fields = solver.fields();
  if (!wrote_last) snapshot(res.fields);
  diag.final = solver.totals();
  finalize_drift(diag);
  diag.step_count = solver.step_count();
  diag.final_time = solver.time();
  diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  diag.cpu_seconds = double(std::clock() - cpu0) / CLOCKS_PER_SEC;
  res.state = solver.state();
  if (write) {
    write_json((std::filesystem::path(opts.output_dir) /
                (opts.prefix + cfg.scenario + "_diagnostics.json"))
                   .string(),
               diagnostics_json(cfg, diag));
  }
  return res;
}

}  // namespace qbgk::detail
