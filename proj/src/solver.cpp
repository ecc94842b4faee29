#include "qbgk/solver.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>

#include "qbgk/equilibrium.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/kernels.hpp"

namespace qbgk {
namespace {

// First exception thrown inside a parallel loop, rethrown after the loop.
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

std::string cell_name(const Grid& g, std::size_t k) {
  std::ostringstream os;
  if (g.dims == 1) {
    os << "cell " << k << ", x=" << g.center(0, static_cast<int>(k));
  } else {
    const int i = static_cast<int>(k % g.n[0]);
    const int j = static_cast<int>(k / g.n[0]);
    os << "cell (" << i << "," << j << "), x=" << g.center(0, i) << ", y=" << g.center(1, j);
  }
  return os.str();
}

const double kGaussLegendre3[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
const double kGaussLegendre3W[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

void Fields::resize(std::size_t n) {
  for (auto* v : {&x, &y, &rho, &e0, &temperature, &fugacity, &p11, &p12, &q1}) v->assign(n, 0.0);
  for (auto& c : u) c.assign(n, 0.0);
  condensed.assign(n, 0);
}

double cfl_dt(const Grid& grid, const BasisSpec& basis, double cfl) {
  if (!(cfl > 0.0)) throw InvalidArgumentError("cfl must be positive");
  double rate = 0.0;
  for (int d = 0; d < grid.dims; ++d) rate += spectral_radius(basis, d) / grid.dx[d];
  return cfl / rate;
}

void reconstruct_faces(Reconstruction r, const double* line, int n, int ghost, std::size_t nb,
                       double* left, double* right) {
  const KernelTable& kt = kernels();
  for (int e = 0; e < n + 2; ++e) {
    const int c = ghost - 1 + e;
    const double* f0 = line + c * nb;
    double* l = left + e * nb;
    double* rr = right + e * nb;
    switch (r) {
      case Reconstruction::None:
        std::copy(f0, f0 + nb, l);
        std::copy(f0, f0 + nb, rr);
        break;
      case Reconstruction::Minmod:
        kt.minmod_faces(f0 - nb, f0, f0 + nb, l, rr, nb);
        break;
      case Reconstruction::Weno5:
        kt.weno5_faces(f0 - 2 * nb, f0 - nb, f0, f0 + nb, f0 + 2 * nb, l, rr, nb);
        break;
    }
  }
}

void hll_flux(const ConvectionOperator& op, const double* f_l, const double* f_r, double* out,
              double* scratch_l, double* scratch_r) {
  const KernelTable& kt = kernels();
  const double sl = op.min_speed();
  const double sr = op.max_speed();
  if (sl >= 0.0) {
    op.apply(f_l, out);
    return;
  }
  if (sr <= 0.0) {
    op.apply(f_r, out);
    return;
  }
  op.apply(f_l, scratch_l);
  op.apply(f_r, scratch_r);
  kt.hll_combine(f_l, f_r, scratch_l, scratch_r, sl, sr, out, op.size());
}

std::vector<double> hll_flux(std::span<const double> f_l, std::span<const double> f_r,
                             const ConvectionOperator& op) {
  if (f_l.size() != op.size() || f_r.size() != op.size()) {
    throw InvalidArgumentError("coefficient length mismatch");
  }
  std::vector<double> out(op.size()), a(op.size()), b(op.size());
  hll_flux(op, f_l.data(), f_r.data(), out.data(), a.data(), b.data());
  return out;
}

std::vector<double> initial_coefficients(const SimulationConfig& cfg, const Grid& grid,
                                         const BasisSpec& basis) {
  const std::size_t nb = basis.size();
  const InitialData& ic = cfg.initial;
  std::vector<double> f(grid.cells() * nb, 0.0);
  std::vector<double> m(nb);
  const int py = grid.dims == 2 ? 3 : 1;
  for (int j = 0; j < grid.n[1]; ++j) {
    for (int i = 0; i < grid.n[0]; ++i) {
      double* out = f.data() + grid.index(i, j) * nb;
      for (int a = 0; a < 3; ++a) {
        const double x = grid.center(0, i) + 0.5 * grid.dx[0] * kGaussLegendre3[a];
        for (int b = 0; b < py; ++b) {
          const double w = kGaussLegendre3W[a] * (py == 3 ? kGaussLegendre3W[b] : 1.0);
          double rho = ic.rho_mean, temp = ic.t_mean;
          const double s = std::sin(2.0 * std::numbers::pi * x);
          switch (ic.kind) {
            case InitialKind::Sine:
              rho = ic.rho_mean + ic.rho_amp * s;
              temp = ic.t_mean + ic.t_amp * s;
              break;
            case InitialKind::Riemann:
              rho = x < ic.split ? ic.rho_left : ic.rho_right;
              temp = x < ic.split ? ic.t_left : ic.t_right;
              break;
            case InitialKind::Uniform:
              break;
          }
          const QuantumParams p = params_from_density_temperature(rho, temp, cfg.theta0, cfg.dv);
          maxwellian_coeffs(p, ic.velocity, basis, m);
          for (std::size_t q = 0; q < nb; ++q) out[q] += w * m[q];
        }
      }
    }
  }
  return f;
}

Solver::Solver(const SimulationConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  grid_ = Grid::from_config(cfg_);
  basis_ = std::make_unique<BasisSpec>(
      cfg_.dv, cfg_.order,
      std::vector<double>(cfg_.center_velocity.begin(), cfg_.center_velocity.begin() + cfg_.dv),
      cfg_.center_temperature);
  nb_ = basis_->size();
  ops_ = convection_matrices(*basis_, grid_.dims);
  for (int face = 0; face < 2 * grid_.dims; ++face) {
    const BoundarySpec& b = cfg_.boundary[face];
    if (b.kind != BoundaryKind::Wall) continue;
    const int d = face / 2;
    walls_[face] = std::make_unique<WallOperator>(*basis_, d, face % 2 == 0 ? -1 : 1, b, cfg_.theta0);
    wall_seed_[face].assign(grid_.n[1 - d], 0.0);
  }
  dt_ = cfg_.fixed_dt > 0.0 ? cfg_.fixed_dt : cfl_dt(grid_, *basis_, cfg_.cfl);
  initialize();
}

void Solver::initialize() {
  const std::size_t nc = grid_.cells();
  eps_.resize(nc);
  for (int j = 0; j < grid_.n[1]; ++j) {
    for (int i = 0; i < grid_.n[0]; ++i) eps_[grid_.index(i, j)] = cfg_.knudsen(grid_.center(0, i));
  }
  y_cache_.assign(nc, 0.0);
  f_ = initial_coefficients(cfg_, grid_, *basis_);
  prev_.resize(f_.size());
  rate_.resize(f_.size());
  stage_.resize(f_.size());
  m_old_.resize(f_.size());
  m_new_.resize(f_.size());
  m_old_valid_ = false;
}

void Solver::set_state(std::vector<double> f) {
  if (f.size() != f_.size()) throw InvalidArgumentError("state size mismatch");
  f_ = std::move(f);
  m_old_valid_ = false;
}

void Solver::sweep(int d, const std::vector<double>& f, std::vector<double>& rate) {
  const int n = grid_.n[d];
  const int g = grid_.ghost;
  const int lines = grid_.n[1 - d];
  const std::size_t nb = nb_;
  const ConvectionOperator& op = ops_[d];
  const double inv_dx = 1.0 / grid_.dx[d];
  const BoundarySpec& lo = cfg_.boundary[2 * d];
  const BoundarySpec& hi = cfg_.boundary[2 * d + 1];
  const WallOperator* wall_lo = walls_[2 * d].get();
  const WallOperator* wall_hi = walls_[2 * d + 1].get();
  const Reconstruction recon = cfg_.reconstruction;
  ErrorSlot err;
  std::int64_t adjusted = 0;

#pragma omp parallel for schedule(static) reduction(+ : adjusted)
  for (int line = 0; line < lines; ++line) {
    try {
      thread_local std::vector<double> buf, left, right, flux, sa, sb;
      buf.resize((n + 2 * g) * nb);
      left.resize((n + 2) * nb);
      right.resize((n + 2) * nb);
      flux.resize((n + 1) * nb);
      sa.resize(nb);
      sb.resize(nb);
      auto cell_index = [&](int i) {
        return d == 0 ? grid_.index(i, line) : grid_.index(line, i);
      };
      for (int i = 0; i < n; ++i) {
        const double* src = f.data() + cell_index(i) * nb;
        std::copy(src, src + nb, buf.data() + (g + i) * nb);
      }
      auto fill = [&](const BoundarySpec& spec, const WallOperator* wall, int face, bool low) {
        const int inner = low ? 0 : n - 1;
        double* first = buf.data() + (low ? 0 : g + n) * nb;
        switch (spec.kind) {
          case BoundaryKind::Periodic:
            for (int c = 0; c < g; ++c) {
              const int src = low ? n - g + c : c;
              std::copy(buf.data() + (g + src) * nb, buf.data() + (g + src + 1) * nb,
                        first + c * nb);
            }
            break;
          case BoundaryKind::Outflow:
            for (int c = 0; c < g; ++c) {
              std::copy(buf.data() + (g + inner) * nb, buf.data() + (g + inner + 1) * nb,
                        first + c * nb);
            }
            break;
          case BoundaryKind::Wall: {
            std::span<const double> interior(buf.data() + (g + inner) * nb, nb);
            std::span<double> ghost(first, nb);
            double& seed = wall_seed_[face][line];
            const WallState st = wall->apply(
                interior, ghost, seed != 0.0 ? std::optional<double>(seed) : std::nullopt);
            if (!st.adjusted) seed = st.wall.y;
            if (st.adjusted) ++adjusted;
            for (int c = 1; c < g; ++c) std::copy(first, first + nb, first + c * nb);
            break;
          }
        }
      };
      fill(lo, wall_lo, 2 * d, true);
      fill(hi, wall_hi, 2 * d + 1, false);

      reconstruct_faces(recon, buf.data(), n, g, nb, left.data(), right.data());
      for (int j = 0; j <= n; ++j) {
        double* out = flux.data() + j * nb;
        if (j == 0 && lo.kind == BoundaryKind::Wall) {
          op.apply(buf.data() + (g - 1) * nb, out);  // A_d g: zero normal mass flux
        } else if (j == n && hi.kind == BoundaryKind::Wall) {
          op.apply(buf.data() + (g + n) * nb, out);
        } else {
          hll_flux(op, right.data() + j * nb, left.data() + (j + 1) * nb, out, sa.data(),
                   sb.data());
        }
      }
      const KernelTable& kt = kernels();
      for (int i = 0; i < n; ++i) {
        kt.flux_divergence(flux.data() + i * nb, flux.data() + (i + 1) * nb, inv_dx,
                           rate.data() + cell_index(i) * nb, nb);
      }
    } catch (...) {
      try {
        rethrow_located("sweep direction " + std::to_string(d) + ", line " + std::to_string(line));
      } catch (...) {
        err.capture();
      }
    }
  }
  err.rethrow();
  adjusted_ += adjusted;
}

void Solver::convection_rate(const std::vector<double>& f, std::vector<double>& rate) {
  rate.assign(f.size(), 0.0);
  for (int d = 0; d < grid_.dims; ++d) sweep(d, f, rate);
}

void Solver::check_finite(const std::vector<double>& f, const char* stage) const {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) {
      std::ostringstream os;
      os << "non-finite coefficient after " << stage << " at step " << steps_ << ", "
         << cell_name(grid_, i / nb_);
      throw BlowUpError(os.str());
    }
  }
}

void Solver::equilibrate(const double* f, std::size_t k, double* m, NewtonTally& tally) {
  double rho = 0.0, e0 = 0.0;
  std::array<double, 3> u{};
  density_velocity_energy({f, nb_}, *basis_, rho, u, e0);
  if (!(e0 > 0.0)) throw DegenerateStateError("non-positive internal energy");
  SolveInfo info;
  const std::optional<double> warm =
      cfg_.warm_start && y_cache_[k] != 0.0 ? std::optional<double>(y_cache_[k]) : std::nullopt;
  const QuantumParams p = solve_z_T(rho, e0, cfg_.theta0, cfg_.dv, warm, &info);
  y_cache_[k] = p.y;
  ++tally.solves;
  tally.iterations += info.iterations;
  tally.max_iterations = std::max(tally.max_iterations, info.iterations);
  if (p.condensed) ++tally.condensed;
  maxwellian_coeffs(p, u, *basis_, {m, nb_});
}

void Solver::equilibrate_all(const std::vector<double>& f, std::vector<double>& m) {
  const std::size_t nc = grid_.cells();
  ErrorSlot err;
  std::int64_t solves = 0, iters = 0, condensed = 0;
  int maxit = 0;
#pragma omp parallel for schedule(static) reduction(+ : solves, iters, condensed) reduction(max : maxit)
  for (std::size_t k = 0; k < nc; ++k) {
    try {
      NewtonTally t;
      equilibrate(f.data() + k * nb_, k, m.data() + k * nb_, t);
      solves += t.solves;
      iters += t.iterations;
      condensed += t.condensed;
      maxit = std::max(maxit, t.max_iterations);
    } catch (...) {
      try {
        rethrow_located("step " + std::to_string(steps_) + ", " + cell_name(grid_, k));
      } catch (...) {
        err.capture();
      }
    }
  }
  err.rethrow();
  tally_.solves += solves;
  tally_.iterations += iters;
  tally_.condensed += condensed;
  tally_.max_iterations = std::max(tally_.max_iterations, maxit);
}

void Solver::convection_step(double dt) {
  convection_rate(f_, rate_);
  kernels().axpy(dt, rate_.data(), f_.data(), f_.size());
  check_finite(f_, "convection");
  m_old_valid_ = false;
}

void Solver::collision_step(double dt) {
  equilibrate_all(f_, m_new_);
  const KernelTable& kt = kernels();
  const std::size_t nc = grid_.cells();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < nc; ++k) {
    double* fk = f_.data() + k * nb_;
    kt.relax(fk, m_new_.data() + k * nb_, dt / eps_[k], fk, nb_);
  }
  // Collisions conserve rho, u, e0, so M(f^{n+1}) = M(f^*).
  std::swap(m_old_, m_new_);
  m_old_valid_ = true;
}

void Solver::step_imex1(double dt) {
  convection_step(dt);
  collision_step(dt);
}

void Solver::step_imex2(double dt) {
  const KernelTable& kt = kernels();
  const std::size_t nc = grid_.cells();
  if (!m_old_valid_) equilibrate_all(f_, m_old_);

  // Stage 1: half step with implicit relaxation at n+1/2.
  convection_rate(f_, rate_);
  stage_ = f_;
  kt.axpy(0.5 * dt, rate_.data(), stage_.data(), stage_.size());
  check_finite(stage_, "stage-one convection");
  equilibrate_all(stage_, m_new_);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < nc; ++k) {
    double* sk = stage_.data() + k * nb_;
    kt.relax(sk, m_new_.data() + k * nb_, 0.5 * dt / eps_[k], sk, nb_);
  }

  // Stage 2: convection of the stage value, trapezoidal relaxation.
  convection_rate(stage_, rate_);
  stage_ = f_;
  kt.axpy(dt, rate_.data(), stage_.data(), stage_.size());
  check_finite(stage_, "stage-two convection");
  equilibrate_all(stage_, m_new_);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < nc; ++k) {
    const std::size_t o = k * nb_;
    kt.relax_trapezoidal(stage_.data() + o, m_new_.data() + o, m_old_.data() + o, f_.data() + o,
                         0.5 * dt / eps_[k], f_.data() + o, nb_);
  }
  std::swap(m_old_, m_new_);
  m_old_valid_ = true;
}

StepRecord Solver::advance(double dt) {
  if (!(dt > 0.0)) throw InvalidArgumentError("time step must be positive");
  prev_ = f_;
  tally_ = NewtonTally{};
  adjusted_ = 0;
  if (cfg_.scheme == TimeScheme::Imex1) {
    step_imex1(dt);
  } else {
    step_imex2(dt);
  }
  ++steps_;
  time_ += dt;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f_.size(); ++i) {
    const double dlt = f_[i] - prev_[i];
    num += dlt * dlt;
    den += prev_[i] * prev_[i];
  }
  StepRecord rec;
  rec.step = steps_;
  rec.time = time_;
  rec.dt = dt;
  rec.newton = take_tally();
  rec.adjusted_walls = take_adjusted_walls();
  rec.residual = std::sqrt(num / den) / dt;
  return rec;
}

NewtonTally Solver::take_tally() {
  NewtonTally t = tally_;
  tally_ = NewtonTally{};
  return t;
}

std::int64_t Solver::take_adjusted_walls() {
  const std::int64_t a = adjusted_;
  adjusted_ = 0;
  return a;
}

Conserved Solver::totals() const {
  Conserved c;
  const double vol = grid_.cell_volume();
  for (std::size_t k = 0; k < grid_.cells(); ++k) {
    const Conserved ck = conserved_from_coeffs(cell(k), *basis_);
    c.mass += vol * ck.mass;
    for (int d = 0; d < 3; ++d) c.momentum[d] += vol * ck.momentum[d];
    c.energy += vol * ck.energy;
  }
  return c;
}

std::vector<double> Solver::equilibrium_coeffs(std::span<const double> f) const {
  double rho = 0.0, e0 = 0.0;
  std::array<double, 3> u{};
  density_velocity_energy(f, *basis_, rho, u, e0);
  const QuantumParams p = solve_z_T(rho, e0, cfg_.theta0, cfg_.dv);
  return maxwellian_coeffs(p, u, *basis_);
}

double Solver::relaxation_distance(std::size_t k) const {
  const std::span<const double> f = cell(k);
  const std::vector<double> m = equilibrium_coeffs(f);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < nb_; ++i) {
    num += (f[i] - m[i]) * (f[i] - m[i]);
    den += f[i] * f[i];
  }
  return std::sqrt(num / den);
}

Fields Solver::fields() const {
  Fields out;
  out.dv = cfg_.dv;
  out.dims = grid_.dims;
  out.resize(grid_.cells());
  for (int j = 0; j < grid_.n[1]; ++j) {
    for (int i = 0; i < grid_.n[0]; ++i) {
      const std::size_t k = grid_.index(i, j);
      const Macroscopic mac = macroscopic_from_coeffs(cell(k), *basis_);
      const QuantumParams p = solve_z_T(mac.rho, mac.e0, cfg_.theta0, cfg_.dv,
                                        y_cache_[k] != 0.0 ? std::optional<double>(y_cache_[k])
                                                           : std::nullopt);
      out.x[k] = grid_.center(0, i);
      out.y[k] = grid_.dims == 2 ? grid_.center(1, j) : 0.0;
      out.rho[k] = mac.rho;
      for (int d = 0; d < 3; ++d) out.u[d][k] = mac.u[d];
      out.e0[k] = mac.e0;
      out.temperature[k] = p.T;
      out.fugacity[k] = p.fugacity();
      out.p11[k] = mac.p[0][0];
      out.p12[k] = mac.p[0][1];
      out.q1[k] = mac.q[0];
      out.condensed[k] = p.condensed ? 1 : 0;
    }
  }
  return out;
}

}  // namespace qbgk
