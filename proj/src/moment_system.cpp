#include "qbgk/moment_system.hpp"

#include <cmath>
#include <numbers>

#include "qbgk/errors.hpp"
#include "qbgk/quadrature.hpp"

namespace qbgk {
namespace {

// int xi^m He_n(xi) phi(xi) dxi
double gaussian_hermite_moment(int m, int n) {
  if (n > m || (m - n) % 2 != 0) return 0.0;
  const int h = (m - n) / 2;
  return factorial(m) / (std::ldexp(1.0, h) * factorial(h));
}

// Raw moments int w^g f dv, w = v - ubar, for |g| <= 3, stored on a 4x4x4 box.
using MomentBox = std::array<std::array<std::array<double, 4>, 4>, 4>;

MomentBox raw_low_moments(std::span<const double> f, const BasisSpec& basis) {
  MomentBox m{};
  const double st = basis.sqrt_center_temperature();
  const std::array<double, 4> tp = {1.0, st, st * st, st * st * st};
  std::size_t limit = basis.size();
  for (std::size_t i = 0; i < limit; ++i) {
    const MultiIndex& a = basis.index(i);
    if (degree(a) > 3) break;  // graded order
    const double fa = f[i];
    if (fa == 0.0) continue;
    for (int g0 = a[0]; g0 <= 3; ++g0) {
      const double c0 = gaussian_hermite_moment(g0, a[0]);
      if (c0 == 0.0) continue;
      for (int g1 = a[1]; g0 + g1 <= 3; ++g1) {
        const double c1 = gaussian_hermite_moment(g1, a[1]);
        if (c1 == 0.0) continue;
        for (int g2 = a[2]; g0 + g1 + g2 <= 3; ++g2) {
          const double c2 = gaussian_hermite_moment(g2, a[2]);
          if (c2 == 0.0) continue;
          m[g0][g1][g2] += fa * c0 * c1 * c2 * tp[g0] * tp[g1] * tp[g2];
        }
      }
    }
  }
  return m;
}

double& at(MomentBox& m, std::initializer_list<int> dirs) {
  std::array<int, 3> g{0, 0, 0};
  for (int d : dirs) ++g[d];
  return m[g[0]][g[1]][g[2]];
}

}  // namespace

Macroscopic macroscopic_from_coeffs(std::span<const double> f, const BasisSpec& basis) {
  if (f.size() != basis.size()) throw InvalidArgumentError("coefficient length mismatch");
  const int dv = basis.dv();
  Macroscopic mac;
  MomentBox m = raw_low_moments(f, basis);
  const double rho = m[0][0][0];
  if (!(rho > 0.0)) throw DegenerateStateError("non-positive density in macroscopic recovery");
  mac.rho = rho;
  std::array<double, 3> a{};
  for (int k = 0; k < dv; ++k) {
    a[k] = at(m, {k}) / rho;
    mac.u[k] = basis.center_velocity()[k] + a[k];
  }
  std::array<std::array<double, 3>, 3> c{};
  double trace = 0.0;
  for (int k = 0; k < dv; ++k) {
    for (int l = 0; l < dv; ++l) c[k][l] = at(m, {k, l}) - rho * a[k] * a[l];
    trace += c[k][k];
  }
  mac.e0 = 0.5 * trace / rho;
  mac.theta = 2.0 * mac.e0 / dv;
  for (int k = 0; k < dv; ++k) {
    for (int l = 0; l < dv; ++l) mac.p[k][l] = c[k][l] - (k == l ? trace / dv : 0.0);
  }
  for (int k = 0; k < dv; ++k) {
    double s = 0.0;
    for (int j = 0; j < dv; ++j) {
      s += at(m, {k, j, j}) - 2.0 * a[j] * at(m, {k, j}) + a[j] * a[j] * at(m, {k}) -
           a[k] * at(m, {j, j}) + 2.0 * a[k] * a[j] * at(m, {j}) - a[k] * a[j] * a[j] * rho;
    }
    mac.q[k] = 0.5 * s;
  }
  return mac;
}

void density_velocity_energy(std::span<const double> f, const BasisSpec& basis, double& rho,
                             std::array<double, 3>& u, double& e0) {
  // rho = f_0, rho a_d = sqrt(Tbar) f_{e_d}, int w_d^2 f = Tbar (f_0 + 2 f_{2e_d})
  const int dv = basis.dv();
  rho = f[0];
  if (!(rho > 0.0)) throw DegenerateStateError("non-positive density in macroscopic recovery");
  const double st = basis.sqrt_center_temperature();
  const double tb = basis.center_temperature();
  double trace = 0.0;
  u = {0.0, 0.0, 0.0};
  for (int d = 0; d < dv; ++d) {
    MultiIndex e{0, 0, 0};
    e[d] = 1;
    const double fe = f[basis.position(e)];
    e[d] = 2;
    const double f2e = f[basis.position(e)];
    const double a = st * fe / rho;
    u[d] = basis.center_velocity()[d] + a;
    trace += tb * (f[0] + 2.0 * f2e) - rho * a * a;
  }
  e0 = 0.5 * trace / rho;
}

Conserved conserved_from_coeffs(std::span<const double> f, const BasisSpec& basis) {
  Conserved c;
  const int dv = basis.dv();
  const double st = basis.sqrt_center_temperature();
  const double tb = basis.center_temperature();
  c.mass = f[0];
  double e2 = 0.0;
  for (int d = 0; d < dv; ++d) {
    MultiIndex e{0, 0, 0};
    e[d] = 1;
    const double fe = f[basis.position(e)];
    e[d] = 2;
    const double f2e = basis.order() >= 2 ? f[basis.position(e)] : 0.0;
    const double ub = basis.center_velocity()[d];
    c.momentum[d] = ub * f[0] + st * fe;
    e2 += (ub * ub + tb) * f[0] + 2.0 * ub * st * fe + 2.0 * tb * f2e;
  }
  c.energy = 0.5 * e2;
  return c;
}

std::vector<double> project_distribution(const VelocityFunction& f, const BasisSpec& basis,
                                         int nodes_per_dim) {
  const int dv = basis.dv();
  const int m = basis.order();
  const int q = nodes_per_dim > 0 ? nodes_per_dim : std::max(m + 2, 24);
  const QuadratureRule& rule = cached_rule(q - 1);
  const int side = m + 1;
  std::array<int, 3> nq{1, 1, 1};
  for (int d = 0; d < dv; ++d) nq[d] = q;

  // he[k*side + n] = He_n(xi_k), xi_k = sqrt(2) x_k
  std::vector<double> he(static_cast<std::size_t>(q) * side);
  for (int k = 0; k < q; ++k) hermite_values(m, std::numbers::sqrt2 * rule.nodes[k], he.data() + k * side);

  // Weighted samples F[k0][k1][k2] = W f(v)
  std::vector<double> samples(static_cast<std::size_t>(nq[0]) * nq[1] * nq[2]);
  std::array<double, 3> v{0, 0, 0};
  const double st = basis.sqrt_center_temperature();
  for (int k0 = 0; k0 < nq[0]; ++k0) {
    for (int k1 = 0; k1 < nq[1]; ++k1) {
      for (int k2 = 0; k2 < nq[2]; ++k2) {
        const std::array<int, 3> kk{k0, k1, k2};
        double w = 1.0;
        for (int d = 0; d < dv; ++d) {
          v[d] = basis.center_velocity()[d] + st * std::numbers::sqrt2 * rule.nodes[kk[d]];
          w *= rule.scaled_weights[kk[d]];
        }
        const double val = f(std::span<const double>(v.data(), dv));
        if (!std::isfinite(val)) throw NumericalError("non-finite distribution value in projection");
        samples[(static_cast<std::size_t>(k0) * nq[1] + k1) * nq[2] + k2] = w * val;
      }
    }
  }
  // Separable contraction, last axis first.
  auto hev = [&](int d, int k, int n) { return d < dv ? he[k * side + n] : (n == 0 ? 1.0 : 0.0); };
  const std::array<int, 3> na{dv > 0 ? side : 1, dv > 1 ? side : 1, dv > 2 ? side : 1};
  std::vector<double> g2(static_cast<std::size_t>(nq[0]) * nq[1] * na[2], 0.0);
  for (int k0 = 0; k0 < nq[0]; ++k0)
    for (int k1 = 0; k1 < nq[1]; ++k1)
      for (int a2 = 0; a2 < na[2]; ++a2) {
        double s = 0.0;
        for (int k2 = 0; k2 < nq[2]; ++k2) {
          s += samples[(static_cast<std::size_t>(k0) * nq[1] + k1) * nq[2] + k2] * hev(2, k2, a2);
        }
        g2[(static_cast<std::size_t>(k0) * nq[1] + k1) * na[2] + a2] = s;
      }
  std::vector<double> g1(static_cast<std::size_t>(nq[0]) * na[1] * na[2], 0.0);
  for (int k0 = 0; k0 < nq[0]; ++k0)
    for (int a1 = 0; a1 < na[1]; ++a1)
      for (int a2 = 0; a2 < na[2]; ++a2) {
        double s = 0.0;
        for (int k1 = 0; k1 < nq[1]; ++k1) {
          s += g2[(static_cast<std::size_t>(k0) * nq[1] + k1) * na[2] + a2] * hev(1, k1, a1);
        }
        g1[(static_cast<std::size_t>(k0) * na[1] + a1) * na[2] + a2] = s;
      }
  // dv = (2 Tbar)^{D/2} dx with x the Gauss-Hermite variable
  const double norm = std::pow(2.0 * basis.center_temperature(), 0.5 * dv);
  std::vector<double> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const MultiIndex& a = basis.index(i);
    double s = 0.0;
    for (int k0 = 0; k0 < nq[0]; ++k0) {
      s += g1[(static_cast<std::size_t>(k0) * na[1] + a[1]) * na[2] + a[2]] * hev(0, k0, a[0]);
    }
    out[i] = s * norm / multi_factorial(a);
  }
  return out;
}

ConvectionOperator::ConvectionOperator(const BasisSpec& basis, int direction)
    : direction_(direction) {
  if (direction < 0 || direction >= basis.dv()) throw InvalidArgumentError("convection direction out of range");
  const std::size_t n = basis.size();
  const double st = basis.sqrt_center_temperature();
  center_ = basis.center_velocity()[direction];
  radius_core_ = st * hermite_largest_root(basis.order() + 1);
  radius_ = std::abs(center_) + radius_core_;
  up_.resize(n);
  down_.resize(n);
  up_coef_.resize(n);
  down_coef_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int u = basis.up(direction, i);
    const int d = basis.down(direction, i);
    const int ad = basis.index(i)[direction];
    up_[i] = u >= 0 ? u : static_cast<std::int32_t>(i);
    up_coef_[i] = u >= 0 ? (ad + 1) * st : 0.0;
    down_[i] = d >= 0 ? d : static_cast<std::int32_t>(i);
    down_coef_[i] = d >= 0 ? st : 0.0;
  }
  bind();
}

ConvectionOperator::ConvectionOperator(ConvectionOperator&& o) noexcept
    : direction_(o.direction_),
      center_(o.center_),
      radius_core_(o.radius_core_),
      radius_(o.radius_),
      up_(std::move(o.up_)),
      down_(std::move(o.down_)),
      up_coef_(std::move(o.up_coef_)),
      down_coef_(std::move(o.down_coef_)) {
  bind();
}

ConvectionOperator& ConvectionOperator::operator=(ConvectionOperator&& o) noexcept {
  direction_ = o.direction_;
  center_ = o.center_;
  radius_core_ = o.radius_core_;
  radius_ = o.radius_;
  up_ = std::move(o.up_);
  down_ = std::move(o.down_);
  up_coef_ = std::move(o.up_coef_);
  down_coef_ = std::move(o.down_coef_);
  bind();
  return *this;
}

void ConvectionOperator::bind() {
  stencil_.up = up_.data();
  stencil_.up_coef = up_coef_.data();
  stencil_.down = down_.data();
  stencil_.down_coef = down_coef_.data();
  stencil_.diag = center_;
  stencil_.n = up_.size();
}

void ConvectionOperator::apply(const double* f, double* out) const {
  kernels().tri_apply(stencil_, f, out);
}

std::vector<ConvectionOperator> convection_matrices(const BasisSpec& basis, int spatial_dims) {
  if (spatial_dims < 1 || spatial_dims > basis.dv()) {
    throw InvalidArgumentError("spatial dimension must be in [1, Dv]");
  }
  std::vector<ConvectionOperator> ops;
  for (int d = 0; d < spatial_dims; ++d) ops.emplace_back(basis, d);
  return ops;
}

double spectral_radius(const BasisSpec& basis, int direction) {
  return std::abs(basis.center_velocity()[direction]) +
         basis.sqrt_center_temperature() * hermite_largest_root(basis.order() + 1);
}

}  // namespace qbgk
