#pragma once

#include <functional>
#include <vector>

namespace qbgk {

inline constexpr int kDefaultIntegrationOrder = 150;
inline constexpr int kMaxIntegrationOrder = 200;

// Gauss rule for a weight w(x) on the real line (Hermite: e^{-x^2}) or half line (Laguerre: e^{-t}).
struct QuadratureRule {
  std::vector<double> nodes;  // ascending
  std::vector<double> weights;
  // weights[k] / w(nodes[k]); computed directly so the tails keep full relative precision
  std::vector<double> scaled_weights;

  std::size_t size() const { return nodes.size(); }
};

// Gauss-Hermite rule with n_int + 1 nodes, exact for polynomials of degree <= 2 n_int + 1.
QuadratureRule build_rule(int n_int);
// Memoized build_rule; the reference stays valid for the life of the process.
const QuadratureRule& cached_rule(int n_int);

// Gauss-Laguerre rule (weight e^{-t} on [0, inf)) with n nodes.
QuadratureRule build_laguerre_rule(int n);
const QuadratureRule& cached_laguerre_rule(int n);

// sqrt(beta) * sum_k w_k g(sqrt(beta) x_k) for a Hermite rule.
double integrate_rescaled(const std::function<double(double)>& g, double beta,
                          const QuadratureRule& rule);

// Roots of the probabilists' Hermite polynomial He_n, ascending.
std::vector<double> hermite_roots(int n);
// Largest root of He_n (n >= 1).
double hermite_largest_root(int n);

}  // namespace qbgk
