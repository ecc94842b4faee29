#include "qbgk/dvm.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>

#include "qbgk/equilibrium.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/kernels.hpp"
#include "run_loop.hpp"

namespace qbgk {
namespace {

class ErrorSlot {
 public:
  void capture() {
    std::lock_guard<std::mutex> lock(mu_);
    if (!err_) err_ = std::current_exception();
  }
  void rethrow() {
    if (err_) std::rethrow_exception(err_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr err_;
};

const double kGaussLegendre3[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
const double kGaussLegendre3W[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

VelocityGrid VelocityGrid::make(int dv, std::array<double, 3> bound, std::array<int, 3> points) {
  if (dv < 1 || dv > 3) throw InvalidArgumentError("velocity dimension must be 1, 2 or 3");
  VelocityGrid vg;
  vg.dv = dv;
  std::array<std::vector<double>, 3> axis, w1;
  std::size_t total = 1;
  for (int d = 0; d < 3; ++d) {
    if (d >= dv) {
      axis[d] = {0.0};
      w1[d] = {1.0};
      continue;
    }
    if (!(bound[d] > 0.0) || points[d] < 8) throw InvalidArgumentError("invalid velocity grid");
    vg.bound[d] = bound[d];
    vg.points[d] = points[d];
    const double h = 2.0 * bound[d] / (points[d] - 1);
    for (int i = 0; i < points[d]; ++i) {
      axis[d].push_back(-bound[d] + i * h);
      w1[d].push_back(i == 0 || i == points[d] - 1 ? 0.5 * h : h);
    }
    total *= points[d];
  }
  for (int d = 0; d < dv; ++d) vg.node[d].reserve(total);
  vg.weight.reserve(total);
  for (std::size_t k = 0; k < axis[2].size(); ++k) {
    for (std::size_t j = 0; j < axis[1].size(); ++j) {
      for (std::size_t i = 0; i < axis[0].size(); ++i) {
        const std::array<double, 3> v = {axis[0][i], axis[1][j], axis[2][k]};
        for (int d = 0; d < dv; ++d) vg.node[d].push_back(v[d]);
        vg.weight.push_back(w1[0][i] * w1[1][j] * w1[2][k]);
      }
    }
  }
  return vg;
}

VelocityGrid VelocityGrid::from_config(const SimulationConfig& cfg) {
  return make(cfg.dv, cfg.dvm_bound, cfg.dvm_points);
}

DvmMoments dvm_moments(std::span<const double> f, const VelocityGrid& vg) {
  const KernelTable& kt = kernels();
  const std::size_t n = vg.size();
  const int dv = vg.dv;
  DvmMoments m;
  thread_local std::vector<double> wf;
  wf.resize(n);
  for (std::size_t j = 0; j < n; ++j) wf[j] = vg.weight[j] * f[j];
  double ones = 0.0;
  for (std::size_t j = 0; j < n; ++j) ones += wf[j];
  m.rho = ones;
  if (!(m.rho > 0.0)) throw DegenerateStateError("non-positive density on the velocity grid");
  for (int d = 0; d < dv; ++d) m.u[d] = kt.dot(wf.data(), vg.node[d].data(), n) / m.rho;
  std::array<std::array<double, 3>, 3> c{};
  std::array<double, 3> q{};
  for (std::size_t j = 0; j < n; ++j) {
    std::array<double, 3> cv{};
    double c2 = 0.0;
    for (int d = 0; d < dv; ++d) {
      cv[d] = vg.node[d][j] - m.u[d];
      c2 += cv[d] * cv[d];
    }
    for (int a = 0; a < dv; ++a) {
      for (int b = a; b < dv; ++b) c[a][b] += wf[j] * cv[a] * cv[b];
      q[a] += 0.5 * wf[j] * c2 * cv[a];
    }
  }
  double trace = 0.0;
  for (int a = 0; a < dv; ++a) {
    for (int b = 0; b < a; ++b) c[a][b] = c[b][a];
    trace += c[a][a];
  }
  m.e0 = 0.5 * trace / m.rho;
  for (int a = 0; a < dv; ++a) {
    for (int b = 0; b < dv; ++b) m.p[a][b] = c[a][b] - (a == b ? trace / dv : 0.0);
  }
  m.q = q;
  return m;
}

double h_functional(std::span<const double> f, const VelocityGrid& vg, double theta0) {
  double h = 0.0;
  for (std::size_t j = 0; j < vg.size(); ++j) {
    const double fj = f[j];
    double v = fj > 0.0 ? fj * std::log(fj) : 0.0;
    if (theta0 == 0.0) {
      v -= fj;
    } else {
      const double g = 1.0 - theta0 * fj;
      if (g > 0.0) v += g * std::log(g) / theta0;
    }
    h += vg.weight[j] * v;
  }
  return h;
}

double entropy_production(std::span<const double> f, std::span<const double> m,
                          const VelocityGrid& vg, double theta0) {
  double s = 0.0;
  for (std::size_t j = 0; j < vg.size(); ++j) {
    if (!(f[j] > 0.0)) continue;
    const double g = 1.0 - theta0 * f[j];
    if (!(g > 0.0)) continue;
    s += vg.weight[j] * (m[j] - f[j]) * std::log(f[j] / g);
  }
  return s;
}

DvmSolver::DvmSolver(const SimulationConfig& cfg, std::optional<VelocityGrid> vg) : cfg_(cfg) {
  cfg_.validate();
  for (int face = 0; face < 2 * cfg_.dx; ++face) {
    if (cfg_.boundary[face].kind == BoundaryKind::Wall) {
      throw InvalidArgumentError("the discrete-velocity oracle supports periodic and outflow faces only");
    }
  }
  grid_ = Grid::from_config(cfg_);
  vg_ = vg ? std::move(*vg) : VelocityGrid::from_config(cfg_);
  if (vg_.dv != cfg_.dv) throw InvalidArgumentError("velocity grid dimension mismatch");
  nv_ = vg_.size();

  if (cfg_.fixed_dt > 0.0) {
    dt_ = cfg_.fixed_dt;
  } else {
    const BasisSpec basis(cfg_.dv, cfg_.order,
                          std::vector<double>(cfg_.center_velocity.begin(),
                                              cfg_.center_velocity.begin() + cfg_.dv),
                          cfg_.center_temperature);
    double rate = 0.0;
    for (int d = 0; d < grid_.dims; ++d) rate += vg_.bound[d] / grid_.dx[d];
    dt_ = std::min(cfl_dt(grid_, basis, cfg_.cfl), cfg_.cfl / rate);
  }

  const std::size_t nc = grid_.cells();
  eps_.resize(nc);
  for (int j = 0; j < grid_.n[1]; ++j) {
    for (int i = 0; i < grid_.n[0]; ++i) eps_[grid_.index(i, j)] = cfg_.knudsen(grid_.center(0, i));
  }
  y_cache_.assign(nc, 0.0);

  // Cell averages of the pointwise equilibria, 3-point Gauss-Legendre in x (and y).
  const KernelTable& kt = kernels();
  const InitialData& ic = cfg_.initial;
  f_.assign(nc * nv_, 0.0);
  std::vector<double> m(nv_);
  const double* vel[3] = {vg_.node[0].data(), vg_.node[1].data(), vg_.node[2].data()};
  const int py = grid_.dims == 2 ? 3 : 1;
  for (int j = 0; j < grid_.n[1]; ++j) {
    for (int i = 0; i < grid_.n[0]; ++i) {
      double* out = f_.data() + grid_.index(i, j) * nv_;
      for (int a = 0; a < 3; ++a) {
        const double x = grid_.center(0, i) + 0.5 * grid_.dx[0] * kGaussLegendre3[a];
        const double s = std::sin(2.0 * std::numbers::pi * x);
        double rho = ic.rho_mean, temp = ic.t_mean;
        if (ic.kind == InitialKind::Sine) {
          rho = ic.rho_mean + ic.rho_amp * s;
          temp = ic.t_mean + ic.t_amp * s;
        } else if (ic.kind == InitialKind::Riemann) {
          rho = x < ic.split ? ic.rho_left : ic.rho_right;
          temp = x < ic.split ? ic.t_left : ic.t_right;
        }
        const QuantumParams p = params_from_density_temperature(rho, temp, cfg_.theta0, cfg_.dv);
        kt.quantum_maxwellian(vel, cfg_.dv, ic.velocity.data(), p.T, p.z, p.theta0, m.data(), nv_);
        for (int b = 0; b < py; ++b) {
          const double w = kGaussLegendre3W[a] * (py == 3 ? kGaussLegendre3W[b] : 1.0);
          kt.axpy(w, m.data(), out, nv_);
        }
      }
    }
  }
  prev_.resize(f_.size());
  rate_.resize(f_.size());
  stage_.resize(f_.size());
  m_old_.resize(f_.size());
  m_new_.resize(f_.size());
}

void DvmSolver::set_state(std::vector<double> f) {
  if (f.size() != f_.size()) throw InvalidArgumentError("state size mismatch");
  f_ = std::move(f);
  m_old_valid_ = false;
}

std::vector<double> DvmSolver::equilibrium(std::span<const double> f) const {
  const DvmMoments mo = dvm_moments(f, vg_);
  const QuantumParams p = solve_z_T(mo.rho, mo.e0, cfg_.theta0, cfg_.dv);
  if (p.condensed) throw NumericalError("condensed equilibrium is not representable on a velocity grid");
  std::vector<double> m(nv_);
  const double* vel[3] = {vg_.node[0].data(), vg_.node[1].data(), vg_.node[2].data()};
  kernels().quantum_maxwellian(vel, cfg_.dv, mo.u.data(), p.T, p.z, p.theta0, m.data(), nv_);
  return m;
}

void DvmSolver::equilibrate(const double* f, std::size_t k, double* m, NewtonTally& tally) {
  const DvmMoments mo = dvm_moments({f, nv_}, vg_);
  if (!(mo.e0 > 0.0)) throw DegenerateStateError("non-positive internal energy");
  SolveInfo info;
  const std::optional<double> warm =
      cfg_.warm_start && y_cache_[k] != 0.0 ? std::optional<double>(y_cache_[k]) : std::nullopt;
  const QuantumParams p = solve_z_T(mo.rho, mo.e0, cfg_.theta0, cfg_.dv, warm, &info);
  if (p.condensed) throw NumericalError("condensed equilibrium is not representable on a velocity grid");
  y_cache_[k] = p.y;
  ++tally.solves;
  tally.iterations += info.iterations;
  tally.max_iterations = std::max(tally.max_iterations, info.iterations);
  const double* vel[3] = {vg_.node[0].data(), vg_.node[1].data(), vg_.node[2].data()};
  kernels().quantum_maxwellian(vel, cfg_.dv, mo.u.data(), p.T, p.z, p.theta0, m, nv_);
}

void DvmSolver::equilibrate_all(const std::vector<double>& f, std::vector<double>& m) {
  const std::size_t nc = grid_.cells();
  ErrorSlot err;
  std::int64_t solves = 0, iters = 0;
  int maxit = 0;
#pragma omp parallel for schedule(static) reduction(+ : solves, iters) reduction(max : maxit)
  for (std::size_t k = 0; k < nc; ++k) {
    try {
      NewtonTally t;
      equilibrate(f.data() + k * nv_, k, m.data() + k * nv_, t);
      solves += t.solves;
      iters += t.iterations;
      maxit = std::max(maxit, t.max_iterations);
    } catch (...) {
      try {
        rethrow_located("dvm step " + std::to_string(steps_) + ", cell " + std::to_string(k));
      } catch (...) {
        err.capture();
      }
    }
  }
  err.rethrow();
  tally_.solves += solves;
  tally_.iterations += iters;
  tally_.max_iterations = std::max(tally_.max_iterations, maxit);
}

void DvmSolver::sweep(int d, const std::vector<double>& f, std::vector<double>& rate) {
  const int n = grid_.n[d];
  const int g = grid_.ghost;
  const int lines = grid_.n[1 - d];
  const std::size_t nv = nv_;
  const double inv_dx = 1.0 / grid_.dx[d];
  const BoundarySpec& lo = cfg_.boundary[2 * d];
  const BoundarySpec& hi = cfg_.boundary[2 * d + 1];
  const Reconstruction recon = cfg_.reconstruction;
  const double* vd = vg_.node[d].data();

#pragma omp parallel for schedule(static)
  for (int line = 0; line < lines; ++line) {
    const KernelTable& kt = kernels();
    thread_local std::vector<const double*> cellp;
    thread_local std::vector<double> left, right, prev_right, flux;
    cellp.resize(n + 2 * g);
    left.resize(nv);
    right.resize(nv);
    prev_right.resize(nv);
    flux.resize(nv);
    auto cell_index = [&](int i) { return d == 0 ? grid_.index(i, line) : grid_.index(line, i); };
    for (int i = 0; i < n; ++i) cellp[g + i] = f.data() + cell_index(i) * nv;
    for (int c = 0; c < g; ++c) {
      cellp[c] = lo.kind == BoundaryKind::Periodic ? cellp[g + n - g + c] : cellp[g];
      cellp[g + n + c] = hi.kind == BoundaryKind::Periodic ? cellp[g + c] : cellp[g + n - 1];
    }
    for (int c = g - 1; c <= g + n; ++c) {
      switch (recon) {
        case Reconstruction::None:
          std::copy(cellp[c], cellp[c] + nv, left.begin());
          std::copy(cellp[c], cellp[c] + nv, right.begin());
          break;
        case Reconstruction::Minmod:
          kt.minmod_faces(cellp[c - 1], cellp[c], cellp[c + 1], left.data(), right.data(), nv);
          break;
        case Reconstruction::Weno5:
          kt.weno5_faces(cellp[c - 2], cellp[c - 1], cellp[c], cellp[c + 1], cellp[c + 2],
                         left.data(), right.data(), nv);
          break;
      }
      if (c >= g) {
        // Interface between cells c-1 and c (local padded indices).
        kt.upwind_flux(vd, prev_right.data(), left.data(), flux.data(), nv);
        const int i = c - g;
        if (i - 1 >= 0) kt.axpy(-inv_dx, flux.data(), rate.data() + cell_index(i - 1) * nv, nv);
        if (i < n) kt.axpy(inv_dx, flux.data(), rate.data() + cell_index(i) * nv, nv);
      }
      std::swap(prev_right, right);
    }
  }
}

void DvmSolver::convection_rate(const std::vector<double>& f, std::vector<double>& rate) {
  rate.assign(f.size(), 0.0);
  for (int d = 0; d < grid_.dims; ++d) sweep(d, f, rate);
}

void DvmSolver::collision_step(double dt) {
  equilibrate_all(f_, m_new_);
  const KernelTable& kt = kernels();
  const std::size_t nc = grid_.cells();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < nc; ++k) {
    double* fk = f_.data() + k * nv_;
    kt.relax(fk, m_new_.data() + k * nv_, dt / eps_[k], fk, nv_);
  }
  std::swap(m_old_, m_new_);
  m_old_valid_ = false;  // grid moments of M differ slightly from those of f
}

void DvmSolver::step_imex1(double dt) {
  convection_rate(f_, rate_);
  kernels().axpy(dt, rate_.data(), f_.data(), f_.size());
  collision_step(dt);
}

void DvmSolver::step_imex2(double dt) {
  const KernelTable& kt = kernels();
  const std::size_t nc = grid_.cells();
  equilibrate_all(f_, m_old_);
  convection_rate(f_, rate_);
  stage_ = f_;
  kt.axpy(0.5 * dt, rate_.data(), stage_.data(), stage_.size());
  equilibrate_all(stage_, m_new_);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < nc; ++k) {
    double* sk = stage_.data() + k * nv_;
    kt.relax(sk, m_new_.data() + k * nv_, 0.5 * dt / eps_[k], sk, nv_);
  }
  convection_rate(stage_, rate_);
  stage_ = f_;
  kt.axpy(dt, rate_.data(), stage_.data(), stage_.size());
  equilibrate_all(stage_, m_new_);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < nc; ++k) {
    const std::size_t o = k * nv_;
    kt.relax_trapezoidal(stage_.data() + o, m_new_.data() + o, m_old_.data() + o, f_.data() + o,
                         0.5 * dt / eps_[k], f_.data() + o, nv_);
  }
}

StepRecord DvmSolver::advance(double dt) {
  if (!(dt > 0.0)) throw InvalidArgumentError("time step must be positive");
  prev_ = f_;
  tally_ = NewtonTally{};
  if (cfg_.scheme == TimeScheme::Imex1) {
    step_imex1(dt);
  } else {
    step_imex2(dt);
  }
  for (std::size_t i = 0; i < f_.size(); ++i) {
    if (!std::isfinite(f_[i])) {
      throw BlowUpError("non-finite value in the discrete-velocity state at step " +
                        std::to_string(steps_) + ", cell " + std::to_string(i / nv_));
    }
  }
  ++steps_;
  time_ += dt;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f_.size(); ++i) {
    num += (f_[i] - prev_[i]) * (f_[i] - prev_[i]);
    den += prev_[i] * prev_[i];
  }
  StepRecord rec;
  rec.step = steps_;
  rec.time = time_;
  rec.dt = dt;
  rec.newton = tally_;
  rec.residual = std::sqrt(num / den) / dt;
  return rec;
}

Conserved DvmSolver::totals() const {
  Conserved c;
  const double vol = grid_.cell_volume();
  const KernelTable& kt = kernels();
  std::vector<double> wf(nv_);
  for (std::size_t k = 0; k < grid_.cells(); ++k) {
    const double* f = f_.data() + k * nv_;
    for (std::size_t j = 0; j < nv_; ++j) wf[j] = vg_.weight[j] * f[j];
    double mass = 0.0, energy = 0.0;
    for (std::size_t j = 0; j < nv_; ++j) {
      double v2 = 0.0;
      for (int d = 0; d < vg_.dv; ++d) v2 += vg_.node[d][j] * vg_.node[d][j];
      mass += wf[j];
      energy += 0.5 * v2 * wf[j];
    }
    c.mass += vol * mass;
    c.energy += vol * energy;
    for (int d = 0; d < vg_.dv; ++d) c.momentum[d] += vol * kt.dot(wf.data(), vg_.node[d].data(), nv_);
  }
  return c;
}

Fields DvmSolver::fields() const {
  Fields out;
  out.dv = cfg_.dv;
  out.dims = grid_.dims;
  out.resize(grid_.cells());
  for (int j = 0; j < grid_.n[1]; ++j) {
    for (int i = 0; i < grid_.n[0]; ++i) {
      const std::size_t k = grid_.index(i, j);
      const DvmMoments mo = dvm_moments(cell(k), vg_);
      const QuantumParams p = solve_z_T(mo.rho, mo.e0, cfg_.theta0, cfg_.dv);
      out.x[k] = grid_.center(0, i);
      out.y[k] = grid_.dims == 2 ? grid_.center(1, j) : 0.0;
      out.rho[k] = mo.rho;
      for (int d = 0; d < 3; ++d) out.u[d][k] = mo.u[d];
      out.e0[k] = mo.e0;
      out.temperature[k] = p.T;
      out.fugacity[k] = p.fugacity();
      out.p11[k] = mo.p[0][0];
      out.p12[k] = mo.p[0][1];
      out.q1[k] = mo.q[0];
      out.condensed[k] = p.condensed ? 1 : 0;
    }
  }
  return out;
}

RunResult dvm_run(const SimulationConfig& cfg, const RunOptions& opts,
                  std::optional<VelocityGrid> vg) {
  const auto wall0 = std::chrono::steady_clock::now();
  const std::clock_t cpu0 = std::clock();
  DvmSolver solver(cfg, std::move(vg));
  RunOptions o = opts;
  o.prefix = "dvm_" + opts.prefix;
  return detail::run_loop(solver, cfg, o, wall0, cpu0);
}

}  // namespace qbgk
