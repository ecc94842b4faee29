#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qbgk/boundary.hpp"
#include "qbgk/config.hpp"
#include "qbgk/grid.hpp"
#include "qbgk/hermite_basis.hpp"
#include "qbgk/moment_system.hpp"

namespace qbgk {

// dt = cfl / sum_d (lambda(A_d) / dx_d)
double cfl_dt(const Grid& grid, const BasisSpec& basis, double cfl);

// Face values of the cells -1..n of a padded line of n + 2*ghost cells (each `nb` wide). Output
// arrays hold n + 2 entries; entry e belongs to cell e - 1.
void reconstruct_faces(Reconstruction r, const double* line, int n, int ghost, std::size_t nb,
                       double* left, double* right);

// HLL flux with wave speeds ubar_d -/+ sqrt(Tbar) r_{M+1}.
void hll_flux(const ConvectionOperator& op, const double* f_l, const double* f_r, double* out,
              double* scratch_l, double* scratch_r);
std::vector<double> hll_flux(std::span<const double> f_l, std::span<const double> f_r,
                             const ConvectionOperator& op);

struct NewtonTally {
  std::int64_t solves = 0;
  std::int64_t iterations = 0;
  int max_iterations = 0;
  std::int64_t condensed = 0;
};

struct StepRecord {
  std::int64_t step = 0;
  double time = 0.0;
  double dt = 0.0;
  NewtonTally newton;
  std::int64_t adjusted_walls = 0;
  double residual = 0.0;  // ||f^{n+1} - f^n||_2 / (dt ||f^n||_2)
};

// Per-cell macroscopic output.
struct Fields {
  int dv = 3;
  int dims = 1;
  std::vector<double> x, y;
  std::vector<double> rho, e0, temperature, fugacity, p11, p12, q1;
  std::array<std::vector<double>, 3> u;
  std::vector<std::uint8_t> condensed;

  std::size_t size() const { return rho.size(); }
  void resize(std::size_t n);
};

class Solver {
 public:
  explicit Solver(const SimulationConfig& cfg);

  const SimulationConfig& config() const { return cfg_; }
  const Grid& grid() const { return grid_; }
  const BasisSpec& basis() const { return *basis_; }
  std::size_t basis_size() const { return nb_; }
  const std::vector<ConvectionOperator>& operators() const { return ops_; }
  double time() const { return time_; }
  std::int64_t step_count() const { return steps_; }
  double nominal_dt() const { return dt_; }
  double knudsen(std::size_t cell) const { return eps_[cell]; }

  const std::vector<double>& state() const { return f_; }
  std::span<const double> cell(std::size_t k) const { return {f_.data() + k * nb_, nb_}; }
  // Replaces the coefficients and drops cached equilibria.
  void set_state(std::vector<double> f);

  // rate = -sum_d (F_{+} - F_{-}) / dx_d evaluated on `f`.
  void convection_rate(const std::vector<double>& f, std::vector<double>& rate);
  void convection_step(double dt);
  // Implicit relaxation f <- (f + k M(f)) / (1 + k), k = dt / eps per cell.
  void collision_step(double dt);
  void step_imex1(double dt);
  void step_imex2(double dt);
  // One step of the configured scheme; advances time and records diagnostics.
  StepRecord advance(double dt);

  Conserved totals() const;
  Fields fields() const;
  // Equilibrium coefficients M(f) of cell k and ||f - M(f)||_2 / ||f||_2.
  double relaxation_distance(std::size_t k) const;
  std::vector<double> equilibrium_coeffs(std::span<const double> f) const;

  NewtonTally take_tally();
  std::int64_t take_adjusted_walls();

 private:
  void initialize();
  void equilibrate(const double* f, std::size_t k, double* m, NewtonTally& tally);
  void equilibrate_all(const std::vector<double>& f, std::vector<double>& m);
  void sweep(int d, const std::vector<double>& f, std::vector<double>& rate);
  void check_finite(const std::vector<double>& f, const char* stage) const;

  SimulationConfig cfg_;
  Grid grid_;
  std::unique_ptr<BasisSpec> basis_;
  std::size_t nb_ = 0;
  std::vector<ConvectionOperator> ops_;
  std::array<std::unique_ptr<WallOperator>, 4> walls_;
  std::array<std::vector<double>, 4> wall_seed_;
  double dt_ = 0.0;
  double time_ = 0.0;
  std::int64_t steps_ = 0;

  std::vector<double> f_, prev_, rate_, stage_, m_old_, m_new_;
  bool m_old_valid_ = false;
  std::vector<double> eps_;
  std::vector<double> y_cache_;
  NewtonTally tally_;
  std::int64_t adjusted_ = 0;
};

// Cell averages (3-point Gauss-Legendre per direction) of the configured equilibrium data.
std::vector<double> initial_coefficients(const SimulationConfig& cfg, const Grid& grid,
                                         const BasisSpec& basis);

}  // namespace qbgk
