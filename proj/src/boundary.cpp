#include "qbgk/boundary.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "qbgk/errors.hpp"
#include "qbgk/polylog.hpp"

namespace qbgk {
namespace {

constexpr double kHalfLineCutoff = 40.0;
constexpr double kPanelWidth = 0.5;
constexpr int kPanelPoints = 20;

struct Node {
  double xi;
  double weight;  // includes the standard normal density
};

// Gauss-Legendre panels covering the half line xi > xi0 (side = +1) or xi < xi0 (side = -1).
std::vector<Node> half_line_nodes(double xi0, int side) {
  using GL = boost::math::quadrature::gauss<double, kPanelPoints>;
  const auto& absc = GL::abscissa();
  const auto& wts = GL::weights();
  std::vector<Node> nodes;
  const double a = side > 0 ? std::max(xi0, -kHalfLineCutoff) : -kHalfLineCutoff;
  const double b = side > 0 ? kHalfLineCutoff : std::min(xi0, kHalfLineCutoff);
  if (!(b > a)) return nodes;
  const int panels = static_cast<int>(std::ceil((b - a) / kPanelWidth));
  const double h = (b - a) / panels;
  const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t k = 0; k < absc.size(); ++k) {
      for (int s : {-1, 1}) {
        if (absc[k] == 0.0 && s > 0) continue;
        const double xi = mid + s * 0.5 * h * absc[k];
        nodes.push_back({xi, 0.5 * h * wts[k] * inv_sqrt_2pi * std::exp(-0.5 * xi * xi)});
      }
    }
  }
  return nodes;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

}  // namespace

WallOperator::WallOperator(const BasisSpec& basis, int direction, int side,
                           const BoundarySpec& wall, double theta0)
    : basis_(&basis), direction_(direction), side_(side), wall_(wall), theta0_(theta0),
      dv_(basis.dv()) {
  if (direction < 0 || direction >= dv_) throw InvalidArgumentError("wall direction out of range");
  if (side != -1 && side != 1) throw InvalidArgumentError("wall side must be -1 or +1");
  if (wall.wall_velocity[direction] != 0.0) {
    throw InvalidArgumentError("wall velocity must be tangential");
  }
  if (!(wall.wall_temperature > 0.0)) throw InvalidArgumentError("wall temperature must be positive");
  const int m = basis.order();
  const int n = direction;
  const double st = basis.sqrt_center_temperature();
  const double xi0 = (wall.wall_velocity[n] - basis.center_velocity()[n]) / st;

  // Half-range Gram matrix S_ab = int_{interior half} He_a He_b phi and flux weights.
  const std::vector<Node> nodes = half_line_nodes(xi0, side);
  std::vector<double> s((m + 1) * (m + 1), 0.0), q(m + 1, 0.0), he(m + 1);
  for (const Node& nd : nodes) {
    hermite_values(m, nd.xi, he.data());
    const double vn = std::abs(st * (nd.xi - xi0));
    for (int a = 0; a <= m; ++a) {
      const double wa = nd.weight * he[a];
      q[a] += wa * vn;
      for (int b = 0; b <= m; ++b) s[a * (m + 1) + b] += wa * he[b];
    }
  }

  const std::size_t size = basis.size();
  half_row_start_.assign(size + 1, 0);
  for (std::size_t i = 0; i < size; ++i) {
    const MultiIndex& alpha = basis.index(i);
    const int a = alpha[n];
    MultiIndex beta = alpha;
    const int room = m - (degree(alpha) - a);
    for (int b = 0; b <= room; ++b) {
      beta[n] = b;
      const int pos = basis.position(beta);
      const double c = s[a * (m + 1) + b] / factorial(a);
      if (pos < 0 || c == 0.0) continue;
      half_col_.push_back(pos);
      half_coef_.push_back(c);
    }
    half_row_start_[i + 1] = static_cast<std::int32_t>(half_col_.size());
  }
  for (int a = 0; a <= m; ++a) {
    MultiIndex e{0, 0, 0};
    e[n] = a;
    const int pos = basis.position(e);
    if (pos >= 0) {
      flux_pos_.push_back(pos);
      flux_weight_.push_back(q[a]);
    }
  }

  // He_a((w + delta_d)/sqrt(Tbar)) = sum_k c_d[a][k] w^k,  w = v - u^w.
  std::vector<std::vector<std::vector<double>>> c(dv_);
  for (int d = 0; d < dv_; ++d) {
    const double delta = wall.wall_velocity[d] - basis.center_velocity()[d];
    c[d].assign(m + 1, std::vector<double>(m + 1, 0.0));
    for (int a = 0; a <= m; ++a) {
      const std::vector<double> h = hermite1d_coeffs(a);
      for (int j = 0; j <= a; ++j) {
        if (h[j] == 0.0) continue;
        const double hj = h[j] / std::pow(st, j);
        for (int k = 0; k <= j; ++k) c[d][a][k] += hj * binomial(j, k) * std::pow(delta, j - k);
      }
    }
  }
  // Half-space moments of the wall Maxwellian:
  // int_{incoming} prod w_d^{k_d} M^w = sigma^{k_n} (1/2) prod Gamma((k_d+1)/2) (2T^w)^S A_S,
  // S = (|k| + D)/2, tangential k_d even, sigma = -side.
  const double tw2 = 2.0 * wall.wall_temperature;
  const double sigma = -side;
  for (int k = 0; k <= m; ++k) orders_.push_back(0.5 * (k + dv_));
  const std::size_t ns = orders_.size();
  wall_matrix_.assign(size * ns, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    const MultiIndex& alpha = basis.index(i);
    const double inv_fact = 1.0 / multi_factorial(alpha);
    MultiIndex k{0, 0, 0};
    for (k[0] = 0; k[0] <= alpha[0]; ++k[0]) {
      for (k[1] = 0; k[1] <= alpha[1]; ++k[1]) {
        for (k[2] = 0; k[2] <= alpha[2]; ++k[2]) {
          double term = 0.5 * inv_fact;
          bool skip = false;
          for (int d = 0; d < dv_ && !skip; ++d) {
            if (d != n && k[d] % 2 != 0) skip = true;
            const double cd = c[d][alpha[d]][k[d]];
            if (cd == 0.0) skip = true;
            term *= cd * std::tgamma(0.5 * (k[d] + 1));
          }
          if (skip) continue;
          if (k[n] % 2 != 0) term *= sigma;
          const int kk = degree(k);
          wall_matrix_[i * ns + kk] += term * std::pow(tw2, orders_[kk]);
        }
      }
    }
  }
  flux_order_ = 0.5 * (dv_ + 1);
  flux_factor_ = 0.5 * std::pow(std::numbers::pi, 0.5 * (dv_ - 1)) * std::pow(tw2, flux_order_);
}

double WallOperator::outgoing_flux(std::span<const double> interior) const {
  double phi = 0.0;
  for (std::size_t i = 0; i < flux_pos_.size(); ++i) phi += flux_weight_[i] * interior[flux_pos_[i]];
  return phi;
}

double WallOperator::normal_flux(std::span<const double> g) const {
  const BasisSpec& b = *basis_;
  MultiIndex e{0, 0, 0};
  e[direction_] = 1;
  const int pos = b.position(e);
  const double shift = b.center_velocity()[direction_] - wall_.wall_velocity[direction_];
  return b.sqrt_center_temperature() * (pos >= 0 ? g[pos] : 0.0) + shift * g[0];
}

WallState WallOperator::apply(std::span<const double> interior, std::span<double> ghost,
                              std::optional<double> seed_y) const {
  const BasisSpec& b = *basis_;
  if (interior.size() != b.size() || ghost.size() != b.size()) {
    throw InvalidArgumentError("coefficient length mismatch");
  }
  WallState st;
  st.outgoing_flux = outgoing_flux(interior);
  if (!(st.outgoing_flux > 0.0) || !std::isfinite(st.outgoing_flux)) {
    throw BoundarySolveError("non-positive mass flux towards the wall");
  }
  const double target = st.outgoing_flux / flux_factor_;  // A_{(D+1)/2}
  QuantumParams& p = st.wall;
  p.theta0 = theta0_;
  p.T = wall_.wall_temperature;
  p.dv = dv_;
  if (theta0_ == 0.0) {
    p.z = target;
  } else {
    const std::optional<double> y = solve_polylog_equation(flux_order_, -theta0_ * target, seed_y);
    if (y) {
      p.y = *y;
    } else {
      p.y = 1.0;
      st.adjusted = true;
      st.scale = target * std::abs(theta0_) / zeta(flux_order_);
    }
    p.z = -p.y / theta0_;
  }

  thread_local std::vector<double> amp;
  amp.resize(orders_.size());
  amplitudes(p, orders_, amp);
  const std::size_t ns = orders_.size();
  for (std::size_t i = 0; i < b.size(); ++i) {
    double sum = 0.0;
    for (std::int32_t j = half_row_start_[i]; j < half_row_start_[i + 1]; ++j) {
      sum += half_coef_[j] * interior[half_col_[j]];
    }
    const double* w = wall_matrix_.data() + i * ns;
    double wsum = 0.0;
    for (std::size_t k = 0; k < ns; ++k) wsum += w[k] * amp[k];
    ghost[i] = sum + st.scale * wsum;
  }
  st.residual = normal_flux(ghost);
  return st;
}

std::vector<double> wall_boundary_ghost(std::span<const double> interior, int direction, int side,
                                        const BoundarySpec& wall, double theta0,
                                        const BasisSpec& basis, WallState* state) {
  const WallOperator op(basis, direction, side, wall, theta0);
  std::vector<double> ghost(basis.size());
  const WallState st = op.apply(interior, ghost);
  if (state) *state = st;
  return ghost;
}

}  // namespace qbgk
