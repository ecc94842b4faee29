#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbgk/config.hpp"
#include "qbgk/moment_system.hpp"
#include "qbgk/solver.hpp"

namespace qbgk {

struct Diagnostics {
  std::vector<StepRecord> steps;
  Conserved initial, final;
  // |change| / |initial| for mass and energy; momentum change is scaled by sqrt(2 mass energy).
  double mass_drift = 0.0;
  double momentum_drift = 0.0;
  double energy_drift = 0.0;
  std::int64_t newton_solves = 0;
  std::int64_t newton_iterations = 0;
  int newton_max = 0;
  std::int64_t condensation_events = 0;  // condensed cell solves summed over steps
  std::int64_t adjusted_walls = 0;
  bool steady = false;
  double last_residual = 0.0;
  std::int64_t step_count = 0;
  double final_time = 0.0;
  double dt = 0.0;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
  double loop_cpu_seconds = 0.0;  // time stepping only (includes snapshot output)
  std::vector<std::string> snapshots;

  double cpu_seconds_per_step() const { return step_count ? loop_cpu_seconds / step_count : 0.0; }
};

void accumulate_step(Diagnostics& diag, const StepRecord& rec, bool keep);
void finalize_drift(Diagnostics& diag);

// `<prefix><scenario>_t<time>.csv`
std::string snapshot_name(const std::string& scenario, double time, const std::string& prefix = "");
// Columns: x, [y], rho, u1..uDv, e0, T, fugacity, p11, [p12], q1
void write_snapshot_csv(const std::string& path, const Fields& fields);
Fields read_snapshot_csv(const std::string& path);

nlohmann::json diagnostics_json(const SimulationConfig& cfg, const Diagnostics& diag);
void write_json(const std::string& path, const nlohmann::json& doc);

struct RunOptions {
  std::string output_dir;  // empty: nothing written
  std::string prefix;
  bool keep_steps = true;
  std::function<void(const Solver&, const StepRecord&)> on_step;
};

struct RunResult {
  Fields fields;
  Diagnostics diagnostics;
  std::vector<double> state;
};

// Runs the Hermite solver to t_end (or to the steady tolerance), writing snapshots at the
// configured cadence plus the final time and one diagnostics JSON when output_dir is set.
RunResult run(const SimulationConfig& cfg, const RunOptions& opts = {});

}  // namespace qbgk
