#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/hermite_basis.hpp"

using namespace qbgk;

TEST(HermiteBasis, IndexSpace) {
  const auto a = index_space(1, 2);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0], (MultiIndex{0, 0, 0}));
  EXPECT_EQ(a[1], (MultiIndex{1, 0, 0}));
  EXPECT_EQ(a[2], (MultiIndex{0, 1, 0}));
  const auto b = index_space(2, 1);
  ASSERT_EQ(b.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(b[k], (MultiIndex{k, 0, 0}));
  EXPECT_EQ(index_space(10, 3).size(), 286u);
  EXPECT_EQ(index_space(30, 2).size(), 496u);
}

TEST(HermiteBasis, IndexSpaceGradedAndUnique) {
  const auto a = index_space(6, 3);
  for (std::size_t k = 1; k < a.size(); ++k) EXPECT_LE(degree(a[k - 1]), degree(a[k]));
  BasisSpec basis(3, 6, {0, 0, 0}, 1.0);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(basis.position(a[k]), int(k));
  EXPECT_EQ(basis.position({7, 0, 0}), -1);
}

TEST(HermiteBasis, NeighbourTables) {
  BasisSpec basis(2, 4, {0, 0}, 1.0);
  for (std::size_t p = 0; p < basis.size(); ++p) {
    const MultiIndex a = basis.index(p);
    for (int d = 0; d < 2; ++d) {
      MultiIndex up = a;
      ++up[d];
      EXPECT_EQ(basis.up(d, p), degree(up) <= 4 ? basis.position(up) : -1);
      if (a[d] > 0) {
        MultiIndex dn = a;
        --dn[d];
        EXPECT_EQ(basis.down(d, p), basis.position(dn));
      } else {
        EXPECT_EQ(basis.down(d, p), -1);
      }
    }
  }
}

TEST(HermiteBasis, OneDimensionalCoefficients) {
  EXPECT_EQ(hermite1d_coeffs(0), (std::vector<double>{1.0}));
  EXPECT_EQ(hermite1d_coeffs(2), (std::vector<double>{-1.0, 0.0, 1.0}));
  EXPECT_EQ(hermite1d_coeffs(3), (std::vector<double>{0.0, -3.0, 0.0, 1.0}));
  for (int n = 0; n <= 20; ++n) {
    const auto c = hermite1d_coeffs(n);
    for (double x : {-2.3, 0.4, 1.7}) {
      double v = 0.0;
      for (int k = n; k >= 0; --k) v = v * x + c[k];
      EXPECT_NEAR(v, oracle::he(n, x), 1e-9 * std::max(1.0, std::abs(v)));
    }
  }
}

TEST(HermiteBasis, ValuesRecurrence) {
  std::vector<double> h(16), s(16);
  hermite_values(15, 1.3, h.data());
  scaled_hermite_values(15, 1.3, s.data());
  for (int n = 0; n <= 15; ++n) {
    EXPECT_NEAR(h[n], oracle::he(n, 1.3), 1e-10 * std::max(1.0, std::abs(h[n])));
    EXPECT_NEAR(s[n], oracle::he(n, 1.3) / oracle::factorial(n), 1e-13);
  }
}

TEST(HermiteBasis, Orthogonality) {
  // int He_m He_n Gaussian = n! delta_mn, checked with an independent trapezoid rule
  const auto line = oracle::trapezoid(0.0, 14.0, 1201);
  for (int m = 0; m <= 12; ++m) {
    for (int n = 0; n <= 12; ++n) {
      double s = 0.0;
      for (std::size_t k = 0; k < line.x.size(); ++k) {
        const double x = line.x[k];
        s += line.w[k] * oracle::he(m, x) * oracle::he(n, x) * std::exp(-0.5 * x * x);
      }
      s /= std::sqrt(2 * std::numbers::pi);
      EXPECT_NEAR(s, m == n ? oracle::factorial(n) : 0.0, 1e-9 * oracle::factorial(std::max(m, n)));
    }
  }
}

namespace {
// Coefficient of v^k in a one-dimensional monomial expansion.
double coef(const std::vector<std::pair<MultiIndex, double>>& m, int k) {
  double c = 0.0;
  for (const auto& [beta, v] : m) {
    if (beta[0] == k) c += v;
  }
  return c;
}
}  // namespace

TEST(HermiteBasis, BasisToMonomial) {
  BasisSpec b1(1, 4, {0.0}, 1.0);
  const auto zero = basis_to_monomial({0, 0, 0}, b1);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].second, 1.0);

  const auto two = basis_to_monomial({2, 0, 0}, b1);
  EXPECT_NEAR(coef(two, 2), 1.0, 1e-15);
  EXPECT_NEAR(coef(two, 1), 0.0, 1e-15);
  EXPECT_NEAR(coef(two, 0), -1.0, 1e-15);

  BasisSpec shifted(1, 4, {1.0}, 4.0);
  const auto one = basis_to_monomial({1, 0, 0}, shifted);
  EXPECT_NEAR(coef(one, 1), 0.5, 1e-15);
  EXPECT_NEAR(coef(one, 0), -0.5, 1e-15);
}

TEST(HermiteBasis, BasisToMonomialEvaluates) {
  BasisSpec basis(3, 5, {0.3, -0.2, 0.1}, 0.8);
  const double v[3] = {0.7, -1.1, 0.45};
  for (std::size_t p = 0; p < basis.size(); ++p) {
    const MultiIndex a = basis.index(p);
    double mono = 0.0;
    for (auto& [beta, c] : basis_to_monomial(a, basis)) {
      mono += c * std::pow(v[0], beta[0]) * std::pow(v[1], beta[1]) * std::pow(v[2], beta[2]);
    }
    double direct = 1.0;
    for (int d = 0; d < 3; ++d) direct *= oracle::he(a[d], (v[d] - basis.center_velocity()[d]) / std::sqrt(0.8));
    EXPECT_NEAR(mono, direct, 1e-11 * std::max(1.0, std::abs(direct)));
  }
}

TEST(HermiteBasis, EvaluateExpansion) {
  BasisSpec b(1, 3, {0.0}, 1.0);
  std::vector<double> c(b.size(), 0.0);
  c[0] = 1.0;
  const double v0[1] = {0.0};
  const double v10[1] = {10.0};
  EXPECT_NEAR(evaluate_expansion(c, b, v0), 1.0 / std::sqrt(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(evaluate_expansion(c, b, v10), std::exp(-50.0) / std::sqrt(2 * std::numbers::pi), 1e-36);

  BasisSpec b3(3, 4, {0.1, 0.0, -0.2}, 1.3);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<double> c1(b3.size()), c2(b3.size()), mix(b3.size());
  for (std::size_t i = 0; i < b3.size(); ++i) {
    c1[i] = nd(rng);
    c2[i] = nd(rng);
    mix[i] = 2.0 * c1[i] - 0.5 * c2[i];
  }
  const double v[3] = {0.4, -0.9, 1.2};
  EXPECT_NEAR(evaluate_expansion(mix, b3, v),
              2.0 * evaluate_expansion(c1, b3, v) - 0.5 * evaluate_expansion(c2, b3, v), 1e-13);
  // Against the pointwise definition
  double direct = 0.0;
  for (std::size_t p = 0; p < b3.size(); ++p) {
    double h = 1.0;
    for (int d = 0; d < 3; ++d) h *= oracle::he(b3.index(p)[d], (v[d] - b3.center_velocity()[d]) / std::sqrt(1.3));
    direct += c1[p] * h;
  }
  direct *= basis_weight(b3, v);
  EXPECT_NEAR(evaluate_expansion(c1, b3, v), direct, 1e-13);
  const double r2 = std::pow(0.4 - 0.1, 2) + 0.81 + std::pow(1.4, 2);
  EXPECT_NEAR(basis_weight(b3, v), std::exp(-r2 / 2.6) / std::pow(2 * std::numbers::pi * 1.3, 1.5), 1e-15);
}

TEST(HermiteBasis, Validation) {
  EXPECT_THROW(BasisSpec(4, 3, {0, 0, 0, 0}, 1.0), InvalidArgumentError);
  EXPECT_THROW(BasisSpec(2, 3, {0, 0}, 0.0), InvalidArgumentError);
  EXPECT_THROW(BasisSpec(2, 3, {0}, 1.0), InvalidArgumentError);
}
