#pragma once

#include <span>
#include <vector>

#include "qbgk/quadrature.hpp"

namespace qbgk {

// y at or above which the engine switches from quadrature to the tail-corrected series.
inline constexpr double kPolylogSeriesThreshold = 0.9;
// y below which Fermi-Dirac integrals go to edge-following panels.
inline constexpr double kDegenerateFermiThreshold = -100.0;

double beta_scale(double y);

// Gamma(s) for s a positive multiple of 1/2.
double half_integer_gamma(double s);

// Generalized exponential integral E_s(z) = int_1^inf e^{-z t} t^{-s} dt, z > 0 (z = 0 needs s > 1).
double expint_e(double s, double z);

// Li_s(y) for orders s in {-1/2, 0, 1/2, 1, 3/2, ...} and y <= 1, evaluated with the rescaled
// Gauss quadrature of the Bose/Fermi integral.  Half-integer orders use a Gauss-Hermite rule in x,
// integer orders a Gauss-Laguerre rule in x^2/2; y > 0.9 switches to the series with an
// Euler-Maclaurin tail, y < -100 to Gauss-Legendre panels around the Fermi edge.
// Immutable after construction, so safe to share across threads.
class PolylogEngine {
 public:
  explicit PolylogEngine(int n_int = kDefaultIntegrationOrder);

  int integration_order() const { return n_int_; }

  double value(double s, double y) const;
  // out[i] = Li_{orders[i]}(y); all orders share one set of exponentials.
  void evaluate(double y, std::span<const double> orders, std::span<double> out) const;

 private:
  struct Table {
    std::vector<double> tau;
    std::vector<double> log_tau;
    // rows[p][k] = W_k tau_k^p
    std::vector<std::vector<double>> rows;
  };

  const double* row(const Table& t, int p, std::vector<double>& scratch) const;

  int n_int_;
  Table hermite_;   // folded to x >= 0; tau = x^2
  Table laguerre_;  // tau = t
};

const PolylogEngine& default_polylog();

// Public entry points on the default engine; s >= 1 with 2s integral, y <= 1.
double polylog(double s, double y);
// Li_{s-1}(y) / y, y != 0.
double polylog_derivative(double s, double y);
double zeta(double s);

double polylog_series_oracle(double s, double y);
double polylog_integral_oracle(double s, double y);

}  // namespace qbgk
