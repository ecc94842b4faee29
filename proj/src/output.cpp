#include "qbgk/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbgk/config_io.hpp"
#include "qbgk/errors.hpp"
#include "run_loop.hpp"

namespace qbgk {

void accumulate_step(Diagnostics& diag, const StepRecord& rec, bool keep) {
  if (keep) diag.steps.push_back(rec);
  diag.newton_solves += rec.newton.solves;
  diag.newton_iterations += rec.newton.iterations;
  diag.newton_max = std::max(diag.newton_max, rec.newton.max_iterations);
  diag.condensation_events += rec.newton.condensed;
  diag.adjusted_walls += rec.adjusted_walls;
  diag.last_residual = rec.residual;
  diag.step_count = rec.step;
  diag.final_time = rec.time;
}

void finalize_drift(Diagnostics& diag) {
  const Conserved& a = diag.initial;
  const Conserved& b = diag.final;
  diag.mass_drift = std::abs(b.mass - a.mass) / std::abs(a.mass);
  diag.energy_drift = std::abs(b.energy - a.energy) / std::abs(a.energy);
  double dp = 0.0;
  for (int d = 0; d < 3; ++d) dp += (b.momentum[d] - a.momentum[d]) * (b.momentum[d] - a.momentum[d]);
  diag.momentum_drift = std::sqrt(dp) / std::sqrt(2.0 * a.mass * a.energy);
}

std::string snapshot_name(const std::string& scenario, double time, const std::string& prefix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "_t%.6g.csv", time);
  return prefix + scenario + buf;
}

void write_snapshot_csv(const std::string& path, const Fields& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write snapshot '" + path + "'");
  out << "x";
  if (f.dims == 2) out << ",y";
  out << ",rho";
  for (int d = 0; d < f.dv; ++d) out << ",u" << d + 1;
  out << ",e0,T,fugacity,p11";
  if (f.dv >= 2) out << ",p12";
  out << ",q1\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.15g", v);
    out << buf;
  };
  for (std::size_t k = 0; k < f.size(); ++k) {
    put(f.x[k]);
    if (f.dims == 2) {
      out << ',';
      put(f.y[k]);
    }
    out << ',';
    put(f.rho[k]);
    for (int d = 0; d < f.dv; ++d) {
      out << ',';
      put(f.u[d][k]);
    }
    for (double v : {f.e0[k], f.temperature[k], f.fugacity[k], f.p11[k]}) {
      out << ',';
      put(v);
    }
    if (f.dv >= 2) {
      out << ',';
      put(f.p12[k]);
    }
    out << ',';
    put(f.q1[k]);
    out << '\n';
  }
}

Fields read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read snapshot '" + path + "'");
  std::string header;
  std::getline(in, header);
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  Fields f;
  f.dims = 1;
  f.dv = 0;
  for (const std::string& c : cols) {
    if (c == "y") f.dims = 2;
    if (c.size() == 2 && c[0] == 'u') ++f.dv;
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> r;
    std::stringstream ss(line);
    std::string v;
    while (std::getline(ss, v, ',')) r.push_back(std::stod(v));
    if (r.size() != cols.size()) throw Error("malformed snapshot row in '" + path + "'");
    rows.push_back(std::move(r));
  }
  f.resize(rows.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const std::string& n = cols[c];
    std::vector<double>* dst = nullptr;
    if (n == "x") dst = &f.x;
    else if (n == "y") dst = &f.y;
    else if (n == "rho") dst = &f.rho;
    else if (n == "e0") dst = &f.e0;
    else if (n == "T") dst = &f.temperature;
    else if (n == "fugacity") dst = &f.fugacity;
    else if (n == "p11") dst = &f.p11;
    else if (n == "p12") dst = &f.p12;
    else if (n == "q1") dst = &f.q1;
    else if (n.size() == 2 && n[0] == 'u') dst = &f.u[n[1] - '1'];
    if (!dst) continue;
    for (std::size_t k = 0; k < rows.size(); ++k) (*dst)[k] = rows[k][c];
  }
  return f;
}

nlohmann::json diagnostics_json(const SimulationConfig& cfg, const Diagnostics& d) {
  nlohmann::json j;
  j["config"] = config_entries(cfg);
  auto cons = [](const Conserved& c) {
    return nlohmann::json{{"mass", c.mass}, {"momentum", c.momentum}, {"energy", c.energy}};
  };
  nlohmann::json steps = nlohmann::json::array();
  for (const StepRecord& r : d.steps) {
    steps.push_back({{"step", r.step},
                     {"time", r.time},
                     {"dt", r.dt},
                     {"newton_max", r.newton.max_iterations},
                     {"newton_mean", r.newton.solves ? double(r.newton.iterations) / r.newton.solves : 0.0},
                     {"condensed_cells", r.newton.condensed},
                     {"adjusted_walls", r.adjusted_walls},
                     {"residual", r.residual}});
  }
  j["steps"] = std::move(steps);
  j["totals"] = {
      {"step_count", d.step_count},
      {"final_time", d.final_time},
      {"dt", d.dt},
      {"initial", cons(d.initial)},
      {"final", cons(d.final)},
      {"mass_drift", d.mass_drift},
      {"momentum_drift", d.momentum_drift},
      {"energy_drift", d.energy_drift},
      {"newton_solves", d.newton_solves},
      {"newton_iterations", d.newton_iterations},
      {"newton_max", d.newton_max},
      {"condensation_events", d.condensation_events},
      {"adjusted_walls", d.adjusted_walls},
      {"steady", d.steady},
      {"last_residual", d.last_residual},
      {"wall_seconds", d.wall_seconds},
      {"cpu_seconds", d.cpu_seconds},
      {"cpu_seconds_per_step", d.cpu_seconds_per_step()},
  };
  j["snapshots"] = d.snapshots;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

RunResult run(const SimulationConfig& cfg, const RunOptions& opts) {
  const auto wall0 = std::chrono::steady_clock::now();
  const std::clock_t cpu0 = std::clock();
  Solver solver(cfg);
  return detail::run_loop(solver, cfg, opts, wall0, cpu0);
}

}  // namespace qbgk
