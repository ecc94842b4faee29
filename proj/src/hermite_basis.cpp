#include "qbgk/hermite_basis.hpp"

#include <cmath>
#include <numbers>

#include "qbgk/errors.hpp"

namespace qbgk {

double factorial(int n) {
  if (n < 0) throw InvalidArgumentError("factorial of a negative integer");
  static const std::vector<double> table = [] {
    std::vector<double> t(171, 1.0);
    for (int k = 1; k < 171; ++k) t[k] = t[k - 1] * k;
    return t;
  }();
  if (n >= 171) throw InvalidArgumentError("factorial overflows double");
  return table[n];
}

double multi_factorial(const MultiIndex& a) {
  return factorial(a[0]) * factorial(a[1]) * factorial(a[2]);
}

std::vector<MultiIndex> index_space(int order, int dv) {
  if (order < 0) throw InvalidArgumentError("expansion order must be non-negative");
  if (dv < 1 || dv > kMaxVelocityDims) throw InvalidArgumentError("velocity dimension must be 1..3");
  std::vector<MultiIndex> out;
  for (int n = 0; n <= order; ++n) {
    if (dv == 1) {
      out.push_back({n, 0, 0});
    } else if (dv == 2) {
      for (int a = n; a >= 0; --a) out.push_back({a, n - a, 0});
    } else {
      for (int a = n; a >= 0; --a) {
        for (int b = n - a; b >= 0; --b) out.push_back({a, b, n - a - b});
      }
    }
  }
  return out;
}

BasisSpec::BasisSpec(int dv, int order, std::vector<double> center_velocity,
                     double center_temperature)
    : dv_(dv), order_(order), ubar_(std::move(center_velocity)), tbar_(center_temperature) {
  if (order < 1) throw InvalidArgumentError("expansion order must be >= 1");
  if (!(tbar_ > 0.0)) throw InvalidArgumentError("center temperature must be positive");
  if (static_cast<int>(ubar_.size()) != dv) {
    throw InvalidArgumentError("center velocity must have dv components");
  }
  sqrt_tbar_ = std::sqrt(tbar_);
  indices_ = index_space(order, dv);
  const int side = order + 1;
  std::size_t box = 1;
  for (int d = 0; d < dv; ++d) box *= side;
  lookup_.assign(box, -1);
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const MultiIndex& a = indices_[i];
    lookup_[a[0] + side * (a[1] + side * a[2])] = static_cast<std::int32_t>(i);
  }
  for (int d = 0; d < dv; ++d) {
    up_[d].resize(indices_.size());
    down_[d].resize(indices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      MultiIndex a = indices_[i];
      a[d] += 1;
      up_[d][i] = position(a);
      a[d] -= 2;
      down_[d][i] = position(a);
    }
  }
}

int BasisSpec::position(const MultiIndex& a) const {
  const int side = order_ + 1;
  for (int d = 0; d < kMaxVelocityDims; ++d) {
    if (a[d] < 0) return -1;
    if (d >= dv_ && a[d] != 0) return -1;
  }
  if (degree(a) > order_) return -1;
  return lookup_[a[0] + side * (a[1] + side * a[2])];
}

bool BasisSpec::same_space(const BasisSpec& o) const {
  return dv_ == o.dv_ && order_ == o.order_ && ubar_ == o.ubar_ && tbar_ == o.tbar_;
}

std::vector<double> hermite1d_coeffs(int n) {
  if (n < 0) throw InvalidArgumentError("Hermite degree must be non-negative");
  std::vector<double> prev;            // He_{k-1}
  std::vector<double> cur = {1.0};     // He_k
  for (int k = 0; k < n; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (int j = 0; j <= k; ++j) next[j + 1] += cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= k * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

void hermite_values(int n, double x, double* out) {
  out[0] = 1.0;
  if (n >= 1) out[1] = x;
  for (int k = 1; k < n; ++k) out[k + 1] = x * out[k] - k * out[k - 1];
}

void scaled_hermite_values(int n, double x, double* out) {
  out[0] = 1.0;
  if (n >= 1) out[1] = x;
  for (int k = 1; k < n; ++k) out[k + 1] = (x * out[k] - out[k - 1]) / (k + 1);
}

std::vector<std::pair<MultiIndex, double>> basis_to_monomial(const MultiIndex& alpha,
                                                             const BasisSpec& basis) {
  if (basis.position(alpha) < 0) throw InvalidArgumentError("index outside basis");
  // per direction: polynomial in v_d
  std::array<std::vector<double>, kMaxVelocityDims> poly;
  for (int d = 0; d < kMaxVelocityDims; ++d) {
    if (d >= basis.dv()) {
      poly[d] = {1.0};
      continue;
    }
    const std::vector<double> he = hermite1d_coeffs(alpha[d]);
    const double ub = basis.center_velocity()[d];
    const double inv = 1.0 / basis.sqrt_center_temperature();
    std::vector<double> p(he.size(), 0.0);
    for (std::size_t m = 0; m < he.size(); ++m) {
      // ((v - ub)/sqrt(T))^m = inv^m sum_j C(m,j) v^j (-ub)^{m-j}
      double binom = 1.0;
      for (std::size_t j = 0; j <= m; ++j) {
        p[j] += he[m] * std::pow(inv, static_cast<double>(m)) * binom *
                std::pow(-ub, static_cast<double>(m - j));
        binom = binom * static_cast<double>(m - j) / static_cast<double>(j + 1);
      }
    }
    poly[d] = std::move(p);
  }
  std::vector<std::pair<MultiIndex, double>> out;
  for (std::size_t i = 0; i < poly[0].size(); ++i) {
    for (std::size_t j = 0; j < poly[1].size(); ++j) {
      for (std::size_t k = 0; k < poly[2].size(); ++k) {
        const double c = poly[0][i] * poly[1][j] * poly[2][k];
        if (c != 0.0) {
          out.push_back({MultiIndex{static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)}, c});
        }
      }
    }
  }
  return out;
}

double basis_weight(const BasisSpec& basis, std::span<const double> v) {
  double q = 0.0;
  for (int d = 0; d < basis.dv(); ++d) {
    const double c = v[d] - basis.center_velocity()[d];
    q += c * c;
  }
  const double t = basis.center_temperature();
  return std::exp(-0.5 * q / t) / std::pow(2.0 * std::numbers::pi * t, 0.5 * basis.dv());
}

double evaluate_expansion(std::span<const double> coeffs, const BasisSpec& basis,
                          std::span<const double> v) {
  if (coeffs.size() != basis.size()) throw InvalidArgumentError("coefficient length mismatch");
  if (static_cast<int>(v.size()) < basis.dv()) throw InvalidArgumentError("velocity dimension mismatch");
  const int m = basis.order();
  std::array<std::vector<double>, kMaxVelocityDims> he;
  for (int d = 0; d < kMaxVelocityDims; ++d) {
    he[d].assign(m + 1, 0.0);
    if (d < basis.dv()) {
      hermite_values(m, (v[d] - basis.center_velocity()[d]) / basis.sqrt_center_temperature(),
                     he[d].data());
    } else {
      he[d][0] = 1.0;
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const MultiIndex& a = basis.index(i);
    sum += coeffs[i] * he[0][a[0]] * he[1][a[1]] * he[2][a[2]];
  }
  return sum * basis_weight(basis, v);
}

}  // namespace qbgk
