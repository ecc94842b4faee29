#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "qbgk/config_io.hpp"
#include "qbgk/drivers.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/output.hpp"

using namespace qbgk;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qbgk_" + name);
  fs::remove_all(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST(Drivers, FittedOrder) {
  const std::vector<int> n = {16, 32, 64, 128};
  std::vector<double> e;
  for (int k : n) e.push_back(3.0 * std::pow(k, -1.5));
  EXPECT_NEAR(fitted_order(n, e), 1.5, 1e-12);
  EXPECT_TRUE(std::isnan(fitted_order(n, {0.0, 0.0, 0.0, 0.0})));
  EXPECT_TRUE(std::isnan(fitted_order({16}, {1.0})));
}

TEST(Drivers, ConstantSolutionHasZeroError) {
  SimulationConfig c = preset_config("ap_periodic");
  c.initial.kind = InitialKind::Uniform;
  c.initial.rho_mean = 0.8;
  c.t_end = 0.02;
  SimulationConfig ref = c;
  ref.cells[0] = 32;
  const ConvergenceTable t = run_convergence_study(c, {8, 16}, ref);
  ASSERT_EQ(t.rows.size(), 2u);
  for (const ConvergenceRow& r : t.rows) {
    EXPECT_LT(r.err_rho, 1e-13);
    EXPECT_LT(r.err_temperature, 1e-13);
    EXPECT_LT(r.err_fugacity, 1e-13);
  }
  EXPECT_THROW(run_convergence_study(c, {12}, ref), InvalidArgumentError);
}

TEST(Drivers, ConvergenceTableOutputs) {
  SimulationConfig c = preset_config("ap_periodic");
  c.t_end = 0.02;
  SimulationConfig ref = c;
  ref.cells[0] = 64;
  const ConvergenceTable t = run_convergence_study(c, {8, 16, 32}, ref);
  EXPECT_GT(t.order_rho, 0.5);
  const fs::path dir = fresh_dir("conv");
  fs::create_directories(dir);
  write_convergence_csv((dir / "c.csv").string(), t);
  EXPECT_EQ(first_line(dir / "c.csv"), "cells,err_rho,err_T,err_fugacity");
  const nlohmann::json j = convergence_json(c, t);
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["reference_cells"], 64);
  fs::remove_all(dir);
}

TEST(Drivers, NewtonBenchIsDeterministic) {
  SimulationConfig c = preset_config("newton_bench");
  const NewtonBenchResult a = run_newton_bench(c);
  const NewtonBenchResult b = run_newton_bench(c);
  ASSERT_EQ(a.iterations.size(), 100u);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.source_rho, b.source_rho);
  EXPECT_EQ(a.source_temperature, b.source_temperature);
  for (double r : a.source_rho) {
    EXPECT_GE(r, c.source_min);
    EXPECT_LE(r, c.source_max);
  }
  c.seed += 1;
  EXPECT_NE(run_newton_bench(c).source_rho, a.source_rho);
  const nlohmann::json j = newton_json(preset_config("newton_bench"), a);
  EXPECT_EQ(j["seed"], preset_config("newton_bench").seed);
  EXPECT_EQ(j["generator"], a.generator);
}

TEST(Drivers, WarmStartNeverCostsMore) {
  for (double theta0 : {-9.0, -0.01, 0.01, 9.0}) {
    SimulationConfig c = preset_config("newton_bench");
    c.theta0 = theta0;
    const NewtonBenchResult warm = run_newton_bench(c);
    c.warm_start = false;
    const NewtonBenchResult cold = run_newton_bench(c);
    EXPECT_GE(cold.mean_iterations, warm.mean_iterations) << theta0;
    EXPECT_LE(warm.max_iterations, 10);
    EXPECT_GE(warm.fraction_at_most_5, 0.9);
  }
}

TEST(Drivers, PolylogReport) {
  const PolylogBenchResult r = run_polylog_bench(1);
  ASSERT_EQ(r.orders.size(), 3u);
  EXPECT_EQ(r.points.size(), 3u * 1101u);
  for (const PolylogOrderReport& o : r.orders) {
    EXPECT_LE(o.max_abs_nonpositive, 1e-10) << o.s;
    EXPECT_LE(o.max_abs_moderate, 1e-8);
    EXPECT_LE(o.max_rel_near_one, 1e-4);
    EXPECT_LE(o.rel_at_one, 1e-4);
  }
  const PolylogBenchResult again = run_polylog_bench(1);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    EXPECT_EQ(r.points[i].value, again.points[i].value);
    EXPECT_EQ(r.points[i].oracle, again.points[i].oracle);
  }
}

TEST(Drivers, RelativeL2) {
  EXPECT_DOUBLE_EQ(relative_l2({1.0, 2.0}, {1.0, 2.0}), 0.0);
  EXPECT_NEAR(relative_l2({3.0, 4.0}, {0.0, 5.0}), std::sqrt(9.0 + 1.0) / 5.0, 1e-15);
  EXPECT_DOUBLE_EQ(relative_l2({3.0, 4.0}, {0.0, 0.0}), 5.0);
}

TEST(Drivers, RunWritesOnlyUnderOutputDir) {
  const fs::path dir = fresh_dir("run_out");
  SimulationConfig c = preset_config("ap_periodic");
  c.cells = {16, 1};
  c.t_end = 0.02;
  c.output_interval = 0.01;
  const SimulationConfig before = c;
  RunOptions opts;
  opts.output_dir = (dir / "nested").string();
  const RunResult r = run(c, opts);
  EXPECT_TRUE(c == before);

  std::set<std::string> names;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) names.insert(fs::relative(e.path(), dir / "nested").string());
  }
  EXPECT_GE(names.size(), 3u);  // snapshots plus diagnostics
  EXPECT_TRUE(names.count(snapshot_name("ap_periodic", r.diagnostics.final_time)));
  // recorded relative to the output directory
  for (const std::string& s : r.diagnostics.snapshots) EXPECT_TRUE(names.count(s)) << s;
  const fs::path snap = dir / "nested" / snapshot_name("ap_periodic", r.diagnostics.final_time);
  const std::string header = first_line(snap);
  EXPECT_EQ(header.rfind("x,rho,u1,", 0), 0u) << header;
  EXPECT_NE(header.find(",e0,T,fugacity,p11"), std::string::npos) << header;
  const Fields back = read_snapshot_csv(snap.string());
  ASSERT_EQ(back.size(), r.fields.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back.rho[i], r.fields.rho[i], 1e-12);
  fs::remove_all(dir);
}

TEST(Drivers, DiagnosticsJson) {
  SimulationConfig c = preset_config("ap_periodic");
  c.cells = {16, 1};
  c.t_end = 0.01;
  const RunResult r = run(c);
  const nlohmann::json j = diagnostics_json(c, r.diagnostics);
  EXPECT_EQ(j["config"]["scenario"], "ap_periodic");
  EXPECT_EQ(j["steps"].size(), static_cast<std::size_t>(r.diagnostics.step_count));
  EXPECT_TRUE(j.contains("totals"));
}
