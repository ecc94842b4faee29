#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbgk/hermite_basis.hpp"

namespace qbgk {

// Parameters of the quantum Maxwellian z / (exp(|v-u|^2 / 2T) + theta0 z), y = -z theta0.
struct QuantumParams {
  double theta0 = 0.0;
  double y = 0.0;
  double z = 0.0;
  double T = 0.0;
  bool condensed = false;
  double m0 = 0.0;
  int dv = 3;

  // z |theta0| for quantum gases, z for the classical gas.
  double fugacity() const;
};

struct SolveInfo {
  int iterations = 0;
  double residual = 0.0;
  bool relative_tolerance = false;  // RHS > 1, so the stopping test was scaled by the RHS
};

inline constexpr int kNewtonMaxIterations = 100;
inline constexpr double kNewtonTolerance = 1e-12;

double feasibility_rhs(double rho, double e0, double theta0, int dv);
// |Li_{D/2}|^{(D+2)/2} / |Li_{(D+2)/2}|^{D/2}
double b_function(double y, int dv = 3);
double f_function(double y, int dv = 3);
// lim_{y -> -inf} f_function(y): Gamma(D/2+2)^{D/2} / Gamma(D/2+1)^{(D+2)/2}.
double fermi_limit(int dv);
// b_function(1); infinite for dv < 3.
double bose_critical_rhs(int dv);

QuantumParams solve_z_T(double rho, double e0, double theta0, int dv,
                        std::optional<double> warm_y = std::nullopt, SolveInfo* info = nullptr);

// Equilibrium with prescribed density and temperature (initial data).
QuantumParams params_from_density_temperature(double rho, double T, double theta0, int dv);

// Root y of Li_s(y) = target with y <= 1; std::nullopt when target exceeds zeta(s) (Bose
// overflow). Bracketed Newton in ln|y|, optionally seeded.
std::optional<double> solve_polylog_equation(double s, double target,
                                             std::optional<double> seed = std::nullopt);

// A_S = int-normalised amplitude: -Li_S(y)/theta0 (quantum), zeta(S)/|theta0| (condensed
// thermal part), z (classical).
void amplitudes(const QuantumParams& p, std::span<const double> orders, std::span<double> out);

// Centred moments int M_q (v-u)^gamma dv for gamma in index_space(max_degree, dv) order.
std::vector<double> raw_moments(const QuantumParams& p, int max_degree);

// Hermite coefficients (1/alpha!) int M_q H_alpha dv.
std::vector<double> maxwellian_coeffs(const QuantumParams& p, std::span<const double> u,
                                      const BasisSpec& basis);
void maxwellian_coeffs(const QuantumParams& p, std::span<const double> u, const BasisSpec& basis,
                       std::span<double> out);

double quantum_maxwellian(const QuantumParams& p, std::span<const double> u,
                          std::span<const double> v);

}  // namespace qbgk
