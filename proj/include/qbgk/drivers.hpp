#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbgk/config.hpp"
#include "qbgk/output.hpp"

namespace qbgk {

// ---- convergence study -------------------------------------------------------------------

struct ConvergenceRow {
  int cells = 0;
  double err_rho = 0.0;
  double err_temperature = 0.0;
  double err_fugacity = 0.0;  // z |theta0| (z when classical)
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  int reference_cells = 0;
  // Least-squares slopes of -log(error) against log(N); NaN when an error column is all zero.
  double order_rho = 0.0;
  double order_temperature = 0.0;
  double order_fugacity = 0.0;
};

// Least-squares order -d log(err) / d log(n). NaN with fewer than two positive errors.
double fitted_order(const std::vector<int>& n, const std::vector<double>& err);

// Discrete l2 errors sqrt(mean((a - ref)^2)) against the reference coefficients averaged onto
// each coarse grid. The reference cell count must be a multiple of every entry of `grids`.
ConvergenceTable convergence_against(const SimulationConfig& base, const std::vector<int>& grids,
                                     const SimulationConfig& reference_cfg,
                                     const std::vector<double>& reference_state);
ConvergenceTable run_convergence_study(const SimulationConfig& base, const std::vector<int>& grids,
                                       const SimulationConfig& reference_cfg);

// Columns: cells, err_rho, err_T, err_fugacity.
void write_convergence_csv(const std::string& path, const ConvergenceTable& table);
nlohmann::json convergence_json(const SimulationConfig& base, const ConvergenceTable& table);

// ---- Newton benchmark --------------------------------------------------------------------

struct NewtonBenchResult {
  double theta0 = 0.0;
  std::uint64_t seed = 0;
  std::string generator;
  std::vector<int> iterations;  // Newton iterations per step
  std::vector<double> source_rho, source_temperature;
  int max_iterations = 0;
  double fraction_at_most_5 = 0.0;
  double mean_iterations = 0.0;
};

// Homogeneous cell: f' = (M_q - f) + S(t), S a classical Maxwellian at rest whose density and
// temperature are redrawn every step. Split step: f += dt S, then implicit relaxation.
// Initial data: half-sum of two quantum Maxwellians (rho = 1, T = 1) drifting at +/- e_1.
NewtonBenchResult run_newton_bench(const SimulationConfig& cfg);
// Columns: step, time, iterations, rho_r, T_r.
void write_newton_csv(const std::string& path, const SimulationConfig& cfg,
                      const NewtonBenchResult& res);
nlohmann::json newton_json(const SimulationConfig& cfg, const NewtonBenchResult& res);

// ---- polylog benchmark -------------------------------------------------------------------

struct PolylogPoint {
  double s = 0.0;
  double y = 0.0;
  double value = 0.0;
  double oracle = 0.0;
};

struct PolylogOrderReport {
  double s = 0.0;
  double max_abs_nonpositive = 0.0;  // y in [-10, 0]
  double max_abs_moderate = 0.0;     // y in (0, 0.9]
  double max_rel_near_one = 0.0;     // y in (0.9, 0.999]
  double rel_at_one = 0.0;           // y = 1 against zeta(s)
};

struct PolylogBenchResult {
  std::vector<PolylogOrderReport> orders;
  std::vector<PolylogPoint> points;
  double sweep_seconds = 0.0;  // median over repetitions of the full 3 x 1101 sweep
  int repetitions = 0;
};

// s in {1.5, 2.5, 3.5}, y = -10 .. 1 step 0.01. Series oracle on [-1, 0.5], integral oracle elsewhere.
PolylogBenchResult run_polylog_bench(int repetitions = 5);
// Columns: s, y, value, oracle, abs_err, rel_err.
void write_polylog_csv(const std::string& path, const PolylogBenchResult& res);
nlohmann::json polylog_json(const PolylogBenchResult& res);

// ---- Hermite vs discrete-velocity comparison ---------------------------------------------

struct CompareReport {
  double rel_rho = 0.0;
  double rel_u1 = 0.0;
  double rel_e0 = 0.0;
  double rel_temperature = 0.0;
  double hsm_cpu_per_step = 0.0;
  double dvm_cpu_per_step = 0.0;
  std::int64_t hsm_steps = 0;
  std::int64_t dvm_steps = 0;
  Fields hsm, dvm;

  double speedup() const { return hsm_cpu_per_step > 0.0 ? dvm_cpu_per_step / hsm_cpu_per_step : 0.0; }
};

// ||a - b||_2 / ||b||_2; ||a - b||_2 when b vanishes.
double relative_l2(const std::vector<double>& a, const std::vector<double>& b);

// Runs both solvers on `cfg` (same grid, reconstruction, scheme and dt unless fixed) and
// differences the final fields. Snapshots go to opts.output_dir when set.
CompareReport compare_solvers(const SimulationConfig& cfg, const RunOptions& opts = {});
// Columns: x, [y], rho_hsm, rho_dvm, u1_hsm, u1_dvm, e0_hsm, e0_dvm, T_hsm, T_dvm.
void write_compare_csv(const std::string& path, const CompareReport& rep);
nlohmann::json compare_json(const SimulationConfig& cfg, const CompareReport& rep);

}  // namespace qbgk
