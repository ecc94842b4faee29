#include "qbgk/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qbgk/errors.hpp"
#include "qbgk/polylog.hpp"

namespace qbgk {
namespace {

constexpr double kPi = std::numbers::pi;

void check_dv(int dv) {
  if (dv < 1 || dv > 3) throw InvalidArgumentError("velocity dimension must be 1, 2 or 3");
}

// ln Phi and d(ln Phi)/d(ln|y|) at y, Phi = |Li_{D/2}|^{(D+2)/2} / |Li_{D/2+1}|^{D/2}.
struct PhiEval {
  double phi;
  double dlog;
  double l1;  // Li_{D/2}
  double l2;  // Li_{D/2+1}
};

PhiEval eval_phi(double y, int dv) {
  const double h = 0.5 * dv;
  const std::array<double, 3> orders = {h - 1.0, h, h + 1.0};
  std::array<double, 3> li{};
  default_polylog().evaluate(y, orders, li);
  const double a = h + 1.0, b = h;
  PhiEval e;
  e.l1 = li[1];
  e.l2 = li[2];
  e.phi = std::exp(a * std::log(std::abs(li[1])) - b * std::log(std::abs(li[2])));
  e.dlog = a * li[0] / li[1] - b * li[1] / li[2];
  return e;
}

std::string describe(double rho, double e0, double theta0) {
  std::ostringstream os;
  os.precision(10);
  os << "rho=" << rho << " e0=" << e0 << " theta0=" << theta0;
  return os.str();
}

}  // namespace

double QuantumParams::fugacity() const { return theta0 == 0.0 ? z : std::abs(y); }

double feasibility_rhs(double rho, double e0, double theta0, int dv) {
  check_dv(dv);
  return std::abs(theta0) * rho * std::pow(dv / (4.0 * kPi * e0), 0.5 * dv);
}

double b_function(double y, int dv) {
  check_dv(dv);
  if (!(y > 0.0 && y <= 1.0)) throw InvalidArgumentError("b_function requires y in (0, 1]");
  if (y == 1.0) return bose_critical_rhs(dv);  // Li_{D/2-1} diverges there
  return eval_phi(y, dv).phi;
}

double f_function(double y, int dv) {
  check_dv(dv);
  if (!(y < 0.0)) throw InvalidArgumentError("f_function requires y < 0");
  return eval_phi(y, dv).phi;
}

double fermi_limit(int dv) {
  check_dv(dv);
  const double h = 0.5 * dv;
  return std::pow(std::tgamma(h + 2.0), h) / std::pow(std::tgamma(h + 1.0), h + 1.0);
}

double bose_critical_rhs(int dv) {
  check_dv(dv);
  if (dv < 3) return std::numeric_limits<double>::infinity();
  const double h = 0.5 * dv;
  return std::pow(zeta(h), h + 1.0) / std::pow(zeta(h + 1.0), h);
}

QuantumParams solve_z_T(double rho, double e0, double theta0, int dv, std::optional<double> warm_y,
                        SolveInfo* info) {
  check_dv(dv);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidArgumentError("density must be positive: " + describe(rho, e0, theta0));
  if (!(e0 > 0.0) || !std::isfinite(e0)) throw InvalidArgumentError("internal energy must be positive: " + describe(rho, e0, theta0));
  if (!std::isfinite(theta0)) throw InvalidArgumentError("theta0 must be finite");

  SolveInfo local;
  SolveInfo& si = info ? *info : local;
  si = SolveInfo{};

  QuantumParams p;
  p.theta0 = theta0;
  p.dv = dv;
  const double h = 0.5 * dv;
  if (theta0 == 0.0) {
    p.T = 2.0 * e0 / dv;
    p.z = rho / std::pow(2.0 * kPi * p.T, h);
    return p;
  }

  const double rhs = feasibility_rhs(rho, e0, theta0, dv);
  const double tol = kNewtonTolerance * std::max(1.0, rhs);
  si.relative_tolerance = rhs > 1.0;

  if (theta0 < 0.0) {
    if (dv >= 3 && rhs >= bose_critical_rhs(dv)) {
      p.condensed = true;
      p.y = 1.0;
      p.z = 1.0 / std::abs(theta0);
      p.T = 2.0 * zeta(h) / (dv * zeta(h + 1.0)) * e0;
      p.m0 = rho - std::pow(2.0 * kPi * p.T, h) * zeta(h) / std::abs(theta0);
      return p;
    }
    double lo = 0.0, hi = 1.0;
    double y = rhs / (1.0 + rhs);
    // A cached root is only a better seed when the state moved little; keep the closer one.
    if (warm_y && *warm_y > 0.0 && *warm_y < 1.0 &&
        std::abs(eval_phi(*warm_y, dv).phi - rhs) < std::abs(eval_phi(y, dv).phi - rhs)) {
      y = *warm_y;
    }
    PhiEval e{};
    for (int it = 0;; ++it) {
      e = eval_phi(y, dv);
      const double res = e.phi - rhs;
      si.residual = std::abs(res);
      if (std::abs(res) <= tol) break;
      if (it >= kNewtonMaxIterations) {
        throw ConvergenceError("Bose Newton iteration did not converge: " + describe(rho, e0, theta0));
      }
      if (res < 0.0) lo = y;
      else hi = y;
      const double slope = e.phi * e.dlog / y;
      double next = y - res / slope;
      if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
      if (next == y) break;
      y = next;
      ++si.iterations;
    }
    p.y = y;
    p.z = -y / theta0;
    p.T = 2.0 * e0 / dv * std::abs(e.l1) / std::abs(e.l2);
    return p;
  }

  const double limit = fermi_limit(dv);
  if (rhs >= limit) {
    std::ostringstream os;
    os << "state violates the Pauli bound (rhs=" << rhs << " >= " << limit << "): "
       << describe(rho, e0, theta0);
    throw FeasibilityError(os.str());
  }
  const double inf = std::numeric_limits<double>::infinity();
  double lo = -inf, hi = inf;
  const double log_rhs = std::log(rhs);
  double xi = log_rhs;
  if (warm_y && *warm_y < 0.0) {
    const double xw = std::log(-*warm_y);
    const double gw = std::abs(std::log(eval_phi(-std::exp(xw), dv).phi) - log_rhs);
    if (gw < std::abs(std::log(eval_phi(-rhs, dv).phi) - log_rhs)) xi = xw;
  }
  PhiEval e{};
  for (int it = 0;; ++it) {
    e = eval_phi(-std::exp(xi), dv);
    const double res = e.phi - rhs;
    si.residual = std::abs(res);
    if (std::abs(res) <= tol) break;
    if (it >= kNewtonMaxIterations) {
      throw ConvergenceError("Fermi Newton iteration did not converge: " + describe(rho, e0, theta0));
    }
    if (res < 0.0) lo = xi;
    else hi = xi;
    const double g = std::log(e.phi) - log_rhs;
    double step = -g / e.dlog;
    if (!std::isfinite(step)) step = res < 0.0 ? 8.0 : -8.0;
    step = std::clamp(step, -8.0, 8.0);
    double next = xi + step;
    if (std::isfinite(lo) && std::isfinite(hi) && !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == xi) break;
    xi = next;
    ++si.iterations;
  }
  p.y = -std::exp(xi);
  p.z = -p.y / theta0;
  p.T = 2.0 * e0 / dv * std::abs(e.l1) / std::abs(e.l2);
  return p;
}

std::optional<double> solve_polylog_equation(double s, double target, std::optional<double> seed) {
  if (!std::isfinite(target)) throw InvalidArgumentError("polylog equation target must be finite");
  if (target == 0.0) return 0.0;
  const PolylogEngine& eng = default_polylog();
  const bool bose = target > 0.0;
  if (bose && s > 1.0) {
    const double zs = zeta(s);
    if (target > zs) return std::nullopt;
    if (target == zs) return 1.0;
  }
  const double inf = std::numeric_limits<double>::infinity();
  double lo = -inf, hi = bose ? 0.0 : inf;
  const double at = std::abs(target);
  double eta;
  if (seed && *seed != 0.0 && (*seed > 0.0) == bose && *seed < 1.0) {
    eta = std::log(std::abs(*seed));
  } else if (bose) {
    eta = std::log(std::min(at, 0.5));
  } else {
    eta = at < 1.0 ? std::log(at) : std::pow(std::tgamma(s + 1.0) * at, 1.0 / s);
  }
  const std::array<double, 2> orders = {s - 1.0, s};
  std::array<double, 2> li{};
  for (int it = 0; it <= kNewtonMaxIterations; ++it) {
    const double y = bose ? std::exp(eta) : -std::exp(eta);
    eng.evaluate(y, orders, li);
    const double g = std::log(std::abs(li[1])) - std::log(at);
    if (std::abs(li[1] - target) <= 1e-14 * at) return y;
    if (g < 0.0) lo = eta;
    else hi = eta;
    double step = -g / (li[0] / li[1]);
    if (!std::isfinite(step)) step = g < 0.0 ? 4.0 : -4.0;
    step = std::clamp(step, -8.0, 8.0);
    double next = eta + step;
    if (!(next > lo && next < hi)) {
      next = (std::isfinite(lo) && std::isfinite(hi)) ? 0.5 * (lo + hi)
             : std::isfinite(hi) ? 0.5 * (eta + hi) : eta + step;
    }
    if (next == eta) return y;
    eta = next;
  }
  throw ConvergenceError("polylog equation solve did not converge");
}

QuantumParams params_from_density_temperature(double rho, double T, double theta0, int dv) {
  check_dv(dv);
  if (!(rho > 0.0) || !(T > 0.0)) throw InvalidArgumentError("density and temperature must be positive");
  QuantumParams p;
  p.theta0 = theta0;
  p.dv = dv;
  p.T = T;
  const double scale = std::pow(2.0 * kPi * T, 0.5 * dv);
  if (theta0 == 0.0) {
    p.z = rho / scale;
    return p;
  }
  const std::optional<double> y = solve_polylog_equation(0.5 * dv, -theta0 * rho / scale);
  if (!y) throw FeasibilityError("initial Bose state exceeds the critical density");
  p.y = *y;
  p.z = -p.y / theta0;
  return p;
}

void amplitudes(const QuantumParams& p, std::span<const double> orders, std::span<double> out) {
  if (p.theta0 == 0.0) {
    std::fill(out.begin(), out.end(), p.z);
    return;
  }
  if (p.condensed || p.y == 1.0) {
    for (std::size_t i = 0; i < orders.size(); ++i) out[i] = zeta(orders[i]) / std::abs(p.theta0);
    return;
  }
  default_polylog().evaluate(p.y, orders, out);
  for (double& v : out) v /= -p.theta0;
}

std::vector<double> raw_moments(const QuantumParams& p, int max_degree) {
  const std::vector<MultiIndex> idx = index_space(max_degree, p.dv);
  std::vector<double> orders;
  for (int k = 0; k <= max_degree / 2; ++k) orders.push_back(0.5 * p.dv + k);
  std::vector<double> amp(orders.size());
  amplitudes(p, orders, amp);
  std::vector<double> out(idx.size(), 0.0);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const MultiIndex& g = idx[i];
    bool odd = false;
    double gam = 1.0;
    for (int d = 0; d < p.dv; ++d) {
      if (g[d] % 2 != 0) odd = true;
      gam *= std::tgamma(0.5 * (g[d] + 1));
    }
    if (odd) continue;
    const int n = degree(g);
    out[i] = gam * std::pow(2.0 * p.T, 0.5 * (n + p.dv)) * amp[n / 2];
  }
  if (p.condensed) out[0] += p.m0;
  return out;
}

std::vector<double> maxwellian_coeffs(const QuantumParams& p, std::span<const double> u,
                                      const BasisSpec& basis) {
  std::vector<double> out(basis.size());
  maxwellian_coeffs(p, u, basis, out);
  return out;
}

// Appell shift of each Hermite factor to the equilibrium velocity, contracted with the centred
// moments: M_alpha = (2 pi T)^{D/2} sum_{2j <= alpha} A_{|j|+D/2}
//                    prod_d He_{alpha_d-2j_d}(delta_d)/(alpha_d-2j_d)! (T/2Tbar)^{j_d}/j_d!
void maxwellian_coeffs(const QuantumParams& p, std::span<const double> u, const BasisSpec& basis,
                       std::span<double> out) {
  const int dv = basis.dv();
  const int m = basis.order();
  if (p.dv != dv) throw InvalidArgumentError("equilibrium and basis velocity dimensions differ");
  if (out.size() != basis.size()) throw InvalidArgumentError("coefficient length mismatch");
  if (static_cast<int>(u.size()) < dv) throw InvalidArgumentError("velocity dimension mismatch");

  thread_local std::vector<double> amp, orders, hd, gj;
  const int jmax = m / 2;
  orders.resize(jmax + 1);
  amp.resize(jmax + 1);
  for (int k = 0; k <= jmax; ++k) orders[k] = 0.5 * dv + k;
  amplitudes(p, orders, amp);
  const double pref = std::pow(2.0 * kPi * p.T, 0.5 * dv);
  for (double& a : amp) a *= pref;

  // hd[d*(m+1) + a] = He_a(delta_d)/a!,  gj[j] = q^j/j!
  hd.assign(kMaxVelocityDims * (m + 1), 0.0);
  for (int d = 0; d < kMaxVelocityDims; ++d) {
    if (d < dv) {
      const double delta = (u[d] - basis.center_velocity()[d]) / basis.sqrt_center_temperature();
      scaled_hermite_values(m, delta, hd.data() + d * (m + 1));
    } else {
      hd[d * (m + 1)] = 1.0;
    }
  }
  const double q = 0.5 * p.T / basis.center_temperature();
  gj.resize(jmax + 1);
  gj[0] = 1.0;
  for (int j = 1; j <= jmax; ++j) gj[j] = gj[j - 1] * q / j;

  const double* h0 = hd.data();
  const double* h1 = hd.data() + (m + 1);
  const double* h2 = hd.data() + 2 * (m + 1);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const MultiIndex& a = basis.index(i);
    double sum = 0.0;
    for (int j0 = 0; 2 * j0 <= a[0]; ++j0) {
      const double f0 = h0[a[0] - 2 * j0] * gj[j0];
      for (int j1 = 0; 2 * j1 <= a[1]; ++j1) {
        const double f1 = f0 * h1[a[1] - 2 * j1] * gj[j1];
        for (int j2 = 0; 2 * j2 <= a[2]; ++j2) {
          sum += f1 * h2[a[2] - 2 * j2] * gj[j2] * amp[j0 + j1 + j2];
        }
      }
    }
    if (p.condensed) sum += p.m0 * h0[a[0]] * h1[a[1]] * h2[a[2]];
    out[i] = sum;
  }
}

double quantum_maxwellian(const QuantumParams& p, std::span<const double> u,
                          std::span<const double> v) {
  double a = 0.0;
  for (int d = 0; d < p.dv; ++d) {
    const double c = v[d] - u[d];
    a += c * c;
  }
  const double g = p.z * std::exp(-0.5 * a / p.T);
  return g / (1.0 + p.theta0 * g);
}

}  // namespace qbgk
