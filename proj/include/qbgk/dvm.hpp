#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "qbgk/config.hpp"
#include "qbgk/grid.hpp"
#include "qbgk/moment_system.hpp"
#include "qbgk/output.hpp"
#include "qbgk/solver.hpp"

namespace qbgk {

// Tensor velocity grid, uniform per direction on [-bound_d, bound_d], trapezoidal weights.
struct VelocityGrid {
  int dv = 3;
  std::array<double, 3> bound{};
  std::array<int, 3> points{};
  std::array<std::vector<double>, 3> node;  // per-node coordinates, x-fastest
  std::vector<double> weight;

  static VelocityGrid make(int dv, std::array<double, 3> bound, std::array<int, 3> points);
  static VelocityGrid from_config(const SimulationConfig& cfg);
  std::size_t size() const { return weight.size(); }
};

struct DvmMoments {
  double rho = 0.0;
  std::array<double, 3> u{};
  double e0 = 0.0;
  std::array<std::array<double, 3>, 3> p{};
  std::array<double, 3> q{};
};
DvmMoments dvm_moments(std::span<const double> f, const VelocityGrid& vg);

// sum_j w_j [f ln f + theta0^{-1} (1 - theta0 f) ln(1 - theta0 f)]; f ln f - f when theta0 = 0.
double h_functional(std::span<const double> f, const VelocityGrid& vg, double theta0);
// sum_j w_j (M - f) ln(f / (1 - theta0 f)), the BGK entropy production (non-positive).
double entropy_production(std::span<const double> f, std::span<const double> m,
                          const VelocityGrid& vg, double theta0);

// Discrete-velocity solver of the same split IMEX scheme: finite-volume transport per velocity
// node with upwind fluxes on reconstructed states, pointwise quantum Maxwellian relaxation.
// Periodic and outflow boundaries only.
class DvmSolver {
 public:
  explicit DvmSolver(const SimulationConfig& cfg, std::optional<VelocityGrid> vg = std::nullopt);

  const SimulationConfig& config() const { return cfg_; }
  const Grid& grid() const { return grid_; }
  const VelocityGrid& velocity_grid() const { return vg_; }
  double time() const { return time_; }
  std::int64_t step_count() const { return steps_; }
  double nominal_dt() const { return dt_; }
  const std::vector<double>& state() const { return f_; }
  std::span<const double> cell(std::size_t k) const { return {f_.data() + k * nv_, nv_}; }
  void set_state(std::vector<double> f);

  // Equilibrium of cell data evaluated on the velocity grid.
  std::vector<double> equilibrium(std::span<const double> f) const;

  void convection_rate(const std::vector<double>& f, std::vector<double>& rate);
  void collision_step(double dt);
  void step_imex1(double dt);
  void step_imex2(double dt);
  StepRecord advance(double dt);

  Conserved totals() const;
  Fields fields() const;

 private:
  void equilibrate(const double* f, std::size_t k, double* m, NewtonTally& tally);
  void equilibrate_all(const std::vector<double>& f, std::vector<double>& m);
  void sweep(int d, const std::vector<double>& f, std::vector<double>& rate);

  SimulationConfig cfg_;
  Grid grid_;
  VelocityGrid vg_;
  std::size_t nv_ = 0;
  double dt_ = 0.0;
  double time_ = 0.0;
  std::int64_t steps_ = 0;
  std::vector<double> f_, prev_, rate_, stage_, m_old_, m_new_;
  bool m_old_valid_ = false;
  std::vector<double> eps_, y_cache_;
  NewtonTally tally_;
};

// Same loop, outputs and diagnostics as run(); files carry the `dvm_` prefix.
RunResult dvm_run(const SimulationConfig& cfg, const RunOptions& opts = {},
                  std::optional<VelocityGrid> vg = std::nullopt);

}  // namespace qbgk
