#include "qbgk/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "qbgk/errors.hpp"

namespace qbgk {
namespace {

Eigen::VectorXd tridiagonal_eigenvalues(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("tridiagonal eigen solve failed");
  return solver.eigenvalues();
}

// Orthonormal Hermite functions psi_j(x) = p_j(x) e^{-x^2/2}, j = 0..n.
void hermite_functions(int n, double x, double& psi_n, double& psi_nm1, double& sum_sq) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  sum_sq = 0.0;
  for (int j = 0; j < n; ++j) {
    sum_sq += cur * cur;
    const double next =
        std::sqrt(2.0 / (j + 1)) * x * cur - std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
  }
  psi_n = cur;
  psi_nm1 = prev;
}

// Orthonormal Laguerre functions l_j(t) = L_j(t) e^{-t/2}, j = 0..n.
void laguerre_functions(int n, double t, double& l_n, double& l_nm1, double& sum_sq) {
  double prev = 0.0;
  double cur = std::exp(-0.5 * t);
  sum_sq = 0.0;
  for (int j = 0; j < n; ++j) {
    sum_sq += cur * cur;
    const double next = ((2.0 * j + 1.0 - t) * cur - j * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  l_n = cur;
  l_nm1 = prev;
}

}  // namespace

QuadratureRule build_rule(int n_int) {
  if (n_int < 1 || n_int > kMaxIntegrationOrder) {
    throw InvalidArgumentError("integration order must be in [1, " +
                               std::to_string(kMaxIntegrationOrder) + "]");
  }
  const int n = n_int + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  const Eigen::VectorXd ev = tridiagonal_eigenvalues(diag, sub);

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.scaled_weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double x = ev(k);
    double pn = 0, pnm1 = 0, ss = 0;
    for (int it = 0; it < 4; ++it) {
      hermite_functions(n, x, pn, pnm1, ss);
      x -= pn / (std::sqrt(2.0 * n) * pnm1);
    }
    hermite_functions(n, x, pn, pnm1, ss);
    rule.nodes[k] = x;
    rule.scaled_weights[k] = 1.0 / ss;
    rule.weights[k] = std::exp(-x * x) / ss;
  }
  // Enforce exact symmetry about the origin.
  for (int k = 0; k < n / 2; ++k) {
    const int m = n - 1 - k;
    const double x = 0.5 * (rule.nodes[m] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[m]);
    const double sw = 0.5 * (rule.scaled_weights[k] + rule.scaled_weights[m]);
    rule.nodes[k] = -x;
    rule.nodes[m] = x;
    rule.weights[k] = rule.weights[m] = w;
    rule.scaled_weights[k] = rule.scaled_weights[m] = sw;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule build_laguerre_rule(int n) {
  if (n < 1 || n > 2 * kMaxIntegrationOrder) {
    throw InvalidArgumentError("Laguerre rule size out of range");
  }
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) sub(k - 1) = k;
  const Eigen::VectorXd ev = tridiagonal_eigenvalues(diag, sub);

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.scaled_weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double t = ev(k);
    double ln = 0, lnm1 = 0, ss = 0;
    for (int it = 0; it < 4; ++it) {
      laguerre_functions(n, t, ln, lnm1, ss);
      // t L_n' = n (L_n - L_{n-1}); the e^{-t/2} factors cancel in the ratio
      const double step = t * ln / (n * (ln - lnm1));
      t -= step;
    }
    laguerre_functions(n, t, ln, lnm1, ss);
    rule.nodes[k] = t;
    rule.scaled_weights[k] = 1.0 / ss;
    rule.weights[k] = std::exp(-t) / ss;
  }
  return rule;
}

namespace {

template <class Builder>
const QuadratureRule& memoized(std::map<int, std::unique_ptr<QuadratureRule>>& cache,
                               std::mutex& mu, int key, Builder build) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<QuadratureRule>(build(key))).first;
  }
  return *it->second;
}

}  // namespace

const QuadratureRule& cached_rule(int n_int) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mu;
  return memoized(cache, mu, n_int, build_rule);
}

const QuadratureRule& cached_laguerre_rule(int n) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mu;
  return memoized(cache, mu, n, build_laguerre_rule);
}

double integrate_rescaled(const std::function<double(double)>& g, double beta,
                          const QuadratureRule& rule) {
  if (!(beta > 0.0)) throw InvalidArgumentError("rescaling factor must be positive");
  const double sb = std::sqrt(beta);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double v = g(sb * rule.nodes[k]);
    if (!std::isfinite(v)) throw NumericalError("non-finite integrand value in quadrature");
    sum += rule.weights[k] * v;
  }
  return sb * sum;
}

std::vector<double> hermite_roots(int n) {
  if (n < 1) throw InvalidArgumentError("Hermite degree must be positive");
  if (n == 1) return {0.0};
  const QuadratureRule& r = cached_rule(n - 1);
  std::vector<double> out(r.nodes);
  for (double& x : out) x *= std::numbers::sqrt2;
  return out;
}

double hermite_largest_root(int n) { return hermite_roots(n).back(); }

}  // namespace qbgk
