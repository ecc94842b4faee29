#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace qbgk {

inline constexpr int kMaxVelocityDims = 3;

// Unused trailing components are zero.
using MultiIndex = std::array<int, kMaxVelocityDims>;

inline int degree(const MultiIndex& a) { return a[0] + a[1] + a[2]; }

double factorial(int n);
double multi_factorial(const MultiIndex& a);  // prod_d a_d!

// Graded lexicographic enumeration of {alpha : |alpha| <= M}.
std::vector<MultiIndex> index_space(int order, int dv);

// Hermite basis H_alpha(v) = prod_d He_{alpha_d}((v_d - ubar_d)/sqrt(Tbar)) weighted by the
// unit-mass Gaussian centred at (ubar, Tbar).
class BasisSpec {
 public:
  BasisSpec(int dv, int order, std::vector<double> center_velocity, double center_temperature);

  int dv() const { return dv_; }
  int order() const { return order_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<double>& center_velocity() const { return ubar_; }
  double center_temperature() const { return tbar_; }
  double sqrt_center_temperature() const { return sqrt_tbar_; }

  const std::vector<MultiIndex>& indices() const { return indices_; }
  const MultiIndex& index(std::size_t pos) const { return indices_[pos]; }
  // -1 when the index lies outside the truncated space.
  int position(const MultiIndex& a) const;
  // Position of alpha +/- e_d, or -1.
  int up(int d, std::size_t pos) const { return up_[d][pos]; }
  int down(int d, std::size_t pos) const { return down_[d][pos]; }
  const std::vector<std::int32_t>& up_table(int d) const { return up_[d]; }
  const std::vector<std::int32_t>& down_table(int d) const { return down_[d]; }

  bool same_space(const BasisSpec& other) const;

 private:
  int dv_;
  int order_;
  std::vector<double> ubar_;
  double tbar_;
  double sqrt_tbar_;
  std::vector<MultiIndex> indices_;
  std::vector<std::int32_t> lookup_;  // dense (M+1)^dv box
  std::array<std::vector<std::int32_t>, kMaxVelocityDims> up_;
  std::array<std::vector<std::int32_t>, kMaxVelocityDims> down_;
};

// Monomial coefficients of He_n (index k -> coefficient of x^k).
std::vector<double> hermite1d_coeffs(int n);

// He_0(x) .. He_n(x) by recurrence.
void hermite_values(int n, double x, double* out);
// He_0(x)/0! .. He_n(x)/n!
void scaled_hermite_values(int n, double x, double* out);

// Coefficients C(alpha, beta) with H_alpha(v) = sum_beta C(alpha,beta) v^beta.
std::vector<std::pair<MultiIndex, double>> basis_to_monomial(const MultiIndex& alpha,
                                                             const BasisSpec& basis);

// Unit-mass Gaussian weight of the basis at v.
double basis_weight(const BasisSpec& basis, std::span<const double> v);

// f_M(v) = sum_alpha f_alpha H_alpha(v) Mc(v).
double evaluate_expansion(std::span<const double> coeffs, const BasisSpec& basis,
                          std::span<const double> v);

}  // namespace qbgk
