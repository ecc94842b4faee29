#include "qbgk/drivers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <boost/math/special_functions/zeta.hpp>

#include "qbgk/config_io.hpp"
#include "qbgk/dvm.hpp"
#include "qbgk/equilibrium.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/polylog.hpp"
#include "qbgk/solver.hpp"

namespace qbgk {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out.precision(15);
  return out;
}

double rms_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return a.empty() ? 0.0 : std::sqrt(s / a.size());
}

nlohmann::json order_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

// ---- convergence study -------------------------------------------------------------------

double fitted_order(const std::vector<int>& n, const std::vector<double>& err) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(err[i] > 0.0)) continue;
    const double x = std::log(double(n[i])), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ConvergenceTable convergence_against(const SimulationConfig& base, const std::vector<int>& grids,
                                     const SimulationConfig& reference_cfg,
                                     const std::vector<double>& reference_state) {
  if (base.dx != 1 || reference_cfg.dx != 1) {
    throw InvalidArgumentError("convergence study supports one spatial dimension");
  }
  const int nref = reference_cfg.cells[0];
  ConvergenceTable table;
  table.reference_cells = nref;
  std::vector<double> e_rho, e_t, e_z;
  for (int n : grids) {
    if (n <= 0 || nref % n != 0 || n >= nref) {
      throw InvalidArgumentError("reference grid must be a strict multiple of every study grid");
    }
    SimulationConfig c = base;
    c.cells[0] = n;
    const RunResult r = run(c);

    Solver coarse(c);
    const std::size_t nb = coarse.basis_size();
    if (reference_state.size() != std::size_t(nref) * nb) {
      throw InvalidArgumentError("reference state does not match the study basis");
    }
    const int fac = nref / n;
    std::vector<double> avg(std::size_t(n) * nb, 0.0);
    for (int i = 0; i < nref; ++i) {
      for (std::size_t q = 0; q < nb; ++q) avg[(i / fac) * nb + q] += reference_state[i * nb + q] / fac;
    }
    coarse.set_state(std::move(avg));
    const Fields ref = coarse.fields();

    ConvergenceRow row;
    row.cells = n;
    row.err_rho = rms_diff(r.fields.rho, ref.rho);
    row.err_temperature = rms_diff(r.fields.temperature, ref.temperature);
    row.err_fugacity = rms_diff(r.fields.fugacity, ref.fugacity);
    table.rows.push_back(row);
    e_rho.push_back(row.err_rho);
    e_t.push_back(row.err_temperature);
    e_z.push_back(row.err_fugacity);
  }
  table.order_rho = fitted_order(grids, e_rho);
  table.order_temperature = fitted_order(grids, e_t);
  table.order_fugacity = fitted_order(grids, e_z);
  return table;
}

ConvergenceTable run_convergence_study(const SimulationConfig& base, const std::vector<int>& grids,
                                       const SimulationConfig& reference_cfg) {
  const RunResult ref = run(reference_cfg);
  return convergence_against(base, grids, reference_cfg, ref.state);
}

void write_convergence_csv(const std::string& path, const ConvergenceTable& table) {
  std::ofstream out = open_out(path);
  out << "cells,err_rho,err_T,err_fugacity\n";
  for (const ConvergenceRow& r : table.rows) {
    out << r.cells << ',' << r.err_rho << ',' << r.err_temperature << ',' << r.err_fugacity << '\n';
  }
}

nlohmann::json convergence_json(const SimulationConfig& base, const ConvergenceTable& table) {
  nlohmann::json doc;
  doc["config"] = config_entries(base);
  doc["reference_cells"] = table.reference_cells;
  doc["order"] = {{"rho", order_or_null(table.order_rho)},
                  {"T", order_or_null(table.order_temperature)},
                  {"fugacity", order_or_null(table.order_fugacity)}};
  nlohmann::json rows = nlohmann::json::array();
  for (const ConvergenceRow& r : table.rows) {
    rows.push_back({{"cells", r.cells},
                    {"err_rho", r.err_rho},
                    {"err_T", r.err_temperature},
                    {"err_fugacity", r.err_fugacity}});
  }
  doc["rows"] = rows;
  return doc;
}

// ---- Newton benchmark --------------------------------------------------------------------

NewtonBenchResult run_newton_bench(const SimulationConfig& cfg_in) {
  SimulationConfig cfg = cfg_in;
  cfg.cells = {1, 1};
  cfg.dx = 1;
  cfg.scheme = TimeScheme::Imex1;
  if (cfg.theta0 == 0.0) throw InvalidArgumentError("theta0: the Newton benchmark needs a quantum gas");
  if (!(cfg.fixed_dt > 0.0)) throw InvalidArgumentError("dt: the Newton benchmark needs a fixed step");
  Solver solver(cfg);
  const BasisSpec& basis = solver.basis();
  const int dv = cfg.dv;

  // Initial data.
  const QuantumParams p0 = params_from_density_temperature(1.0, 1.0, cfg.theta0, dv);
  std::vector<double> u(dv, 0.0);
  u[0] = 1.0;
  std::vector<double> f = maxwellian_coeffs(p0, u, basis);
  u[0] = -1.0;
  const std::vector<double> g = maxwellian_coeffs(p0, u, basis);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.5 * (f[i] + g[i]);
  solver.set_state(f);

  NewtonBenchResult res;
  res.theta0 = cfg.theta0;
  res.seed = cfg.seed;
  res.generator = "std::mt19937_64";
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> draw(cfg.source_min, cfg.source_max);
  const std::vector<double> rest(dv, 0.0);
  const double dt = cfg.fixed_dt;
  const auto steps = static_cast<std::int64_t>(std::llround(cfg.t_end / dt));
  std::vector<double> src(basis.size());
  for (std::int64_t n = 0; n < steps && n < cfg.max_steps; ++n) {
    const double rho_r = draw(rng);
    const double t_r = draw(rng);
    const QuantumParams ps = params_from_density_temperature(rho_r, t_r, 0.0, dv);
    maxwellian_coeffs(ps, rest, basis, src);
    std::vector<double> state = solver.state();
    for (std::size_t i = 0; i < state.size(); ++i) state[i] += dt * src[i];
    solver.set_state(std::move(state));
    solver.collision_step(dt);
    const NewtonTally t = solver.take_tally();
    res.iterations.push_back(t.max_iterations);
    res.source_rho.push_back(rho_r);
    res.source_temperature.push_back(t_r);
  }
  int small = 0;
  double sum = 0.0;
  for (int it : res.iterations) {
    res.max_iterations = std::max(res.max_iterations, it);
    small += it <= 5;
    sum += it;
  }
  if (!res.iterations.empty()) {
    res.fraction_at_most_5 = double(small) / res.iterations.size();
    res.mean_iterations = sum / res.iterations.size();
  }
  return res;
}

void write_newton_csv(const std::string& path, const SimulationConfig& cfg,
                      const NewtonBenchResult& res) {
  std::ofstream out = open_out(path);
  out << "step,time,iterations,rho_r,T_r\n";
  for (std::size_t i = 0; i < res.iterations.size(); ++i) {
    out << i + 1 << ',' << (i + 1) * cfg.fixed_dt << ',' << res.iterations[i] << ','
        << res.source_rho[i] << ',' << res.source_temperature[i] << '\n';
  }
}

nlohmann::json newton_json(const SimulationConfig& cfg, const NewtonBenchResult& res) {
  nlohmann::json doc;
  doc["config"] = config_entries(cfg);
  doc["theta0"] = res.theta0;
  doc["generator"] = res.generator;
  doc["seed"] = res.seed;
  doc["steps"] = res.iterations.size();
  doc["max_iterations"] = res.max_iterations;
  doc["mean_iterations"] = res.mean_iterations;
  doc["fraction_at_most_5"] = res.fraction_at_most_5;
  doc["iterations"] = res.iterations;
  return doc;
}

// ---- polylog benchmark -------------------------------------------------------------------

PolylogBenchResult run_polylog_bench(int repetitions) {
  const double orders[3] = {1.5, 2.5, 3.5};
  constexpr int kPoints = 1101;
  auto y_at = [](int i) { return (i - 1000) / 100.0; };
  PolylogBenchResult res;
  res.repetitions = std::max(1, repetitions);
  default_polylog();  // table construction is not part of the sweep

  std::vector<double> values(3 * kPoints);
  std::vector<double> times;
  for (int rep = 0; rep < res.repetitions; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < kPoints; ++i) values[k * kPoints + i] = polylog(orders[k], y_at(i));
    }
    times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(times.begin(), times.end());
  res.sweep_seconds = times[times.size() / 2];

  for (int k = 0; k < 3; ++k) {
    PolylogOrderReport rep;
    rep.s = orders[k];
    for (int i = 0; i < kPoints; ++i) {
      const double y = y_at(i);
      // The engine itself sums the series above 0.9, so the quadrature oracle covers y > 0.5.
      const double oracle = y == 1.0                   ? boost::math::zeta(orders[k])
                            : (y >= -1.0 && y <= 0.5) ? polylog_series_oracle(orders[k], y)
                                                      : polylog_integral_oracle(orders[k], y);
      const double v = values[k * kPoints + i];
      res.points.push_back({orders[k], y, v, oracle});
      const double abs_err = std::abs(v - oracle);
      if (y <= 0.0) {
        rep.max_abs_nonpositive = std::max(rep.max_abs_nonpositive, abs_err);
      } else if (y <= 0.9 + 1e-12) {
        rep.max_abs_moderate = std::max(rep.max_abs_moderate, abs_err);
      } else if (y <= 0.999 + 1e-12) {
        rep.max_rel_near_one = std::max(rep.max_rel_near_one, abs_err / std::abs(oracle));
      } else {
        rep.rel_at_one = std::max(rep.rel_at_one, abs_err / std::abs(oracle));
      }
    }
    res.orders.push_back(rep);
  }
  return res;
}

void write_polylog_csv(const std::string& path, const PolylogBenchResult& res) {
  std::ofstream out = open_out(path);
  out.precision(17);
  out << "s,y,value,oracle,abs_err,rel_err\n";
  for (const PolylogPoint& p : res.points) {
    const double e = std::abs(p.value - p.oracle);
    out << p.s << ',' << p.y << ',' << p.value << ',' << p.oracle << ',' << e << ','
        << (p.oracle != 0.0 ? e / std::abs(p.oracle) : e) << '\n';
  }
}

nlohmann::json polylog_json(const PolylogBenchResult& res) {
  nlohmann::json doc;
  doc["sweep_seconds"] = res.sweep_seconds;
  doc["repetitions"] = res.repetitions;
  doc["evaluations"] = res.points.size();
  nlohmann::json rows = nlohmann::json::array();
  for (const PolylogOrderReport& r : res.orders) {
    rows.push_back({{"s", r.s},
                    {"max_abs_y_le_0", r.max_abs_nonpositive},
                    {"max_abs_0_to_0.9", r.max_abs_moderate},
                    {"max_rel_0.9_to_0.999", r.max_rel_near_one},
                    {"rel_at_1", r.rel_at_one}});
  }
  doc["orders"] = rows;
  return doc;
}

// ---- comparison --------------------------------------------------------------------------

double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidArgumentError("field size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

CompareReport compare_solvers(const SimulationConfig& cfg_in, const RunOptions& opts) {
  SimulationConfig cfg = cfg_in;
  if (!(cfg.fixed_dt > 0.0)) {
    // One step size for both: the velocity grid usually has the faster extreme speed.
    cfg.fixed_dt = DvmSolver(cfg).nominal_dt();
  }
  RunOptions o = opts;
  o.keep_steps = false;
  const RunResult h = run(cfg, o);
  const RunResult d = dvm_run(cfg, o);
  CompareReport rep;
  rep.hsm = h.fields;
  rep.dvm = d.fields;
  rep.rel_rho = relative_l2(h.fields.rho, d.fields.rho);
  rep.rel_u1 = relative_l2(h.fields.u[0], d.fields.u[0]);
  rep.rel_e0 = relative_l2(h.fields.e0, d.fields.e0);
  rep.rel_temperature = relative_l2(h.fields.temperature, d.fields.temperature);
  rep.hsm_cpu_per_step = h.diagnostics.cpu_seconds_per_step();
  rep.dvm_cpu_per_step = d.diagnostics.cpu_seconds_per_step();
  rep.hsm_steps = h.diagnostics.step_count;
  rep.dvm_steps = d.diagnostics.step_count;
  return rep;
}

void write_compare_csv(const std::string& path, const CompareReport& rep) {
  std::ofstream out = open_out(path);
  const bool two_d = rep.hsm.dims == 2;
  out << "x";
  if (two_d) out << ",y";
  out << ",rho_hsm,rho_dvm,u1_hsm,u1_dvm,e0_hsm,e0_dvm,T_hsm,T_dvm\n";
  for (std::size_t k = 0; k < rep.hsm.size(); ++k) {
    out << rep.hsm.x[k];
    if (two_d) out << ',' << rep.hsm.y[k];
    out << ',' << rep.hsm.rho[k] << ',' << rep.dvm.rho[k] << ',' << rep.hsm.u[0][k] << ','
        << rep.dvm.u[0][k] << ',' << rep.hsm.e0[k] << ',' << rep.dvm.e0[k] << ','
        << rep.hsm.temperature[k] << ',' << rep.dvm.temperature[k] << '\n';
  }
}

nlohmann::json compare_json(const SimulationConfig& cfg, const CompareReport& rep) {
  nlohmann::json doc;
  doc["config"] = config_entries(cfg);
  doc["relative_l2"] = {{"rho", rep.rel_rho},
                        {"u1", rep.rel_u1},
                        {"e0", rep.rel_e0},
                        {"T", rep.rel_temperature}};
  doc["hsm"] = {{"steps", rep.hsm_steps}, {"cpu_seconds_per_step", rep.hsm_cpu_per_step}};
  doc["dvm"] = {{"steps", rep.dvm_steps}, {"cpu_seconds_per_step", rep.dvm_cpu_per_step}};
  doc["speedup"] = rep.speedup();
  return doc;
}

}  // namespace qbgk
