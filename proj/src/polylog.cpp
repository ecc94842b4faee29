#include "qbgk/polylog.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "qbgk/errors.hpp"
#include "qbgk/kernels.hpp"

namespace qbgk {
namespace {

constexpr int kPowerRows = 72;
constexpr std::size_t kMaxFolded = 256;
constexpr int kEulerMaclaurinStart = 32;

bool is_half_multiple(double s) { return std::isfinite(s) && 2.0 * s == std::round(2.0 * s); }
bool is_integer(double s) { return s == std::round(s); }

void check_order(double s) {
  if (!is_half_multiple(s) || s < -0.5) {
    throw InvalidArgumentError("polylog order must be a multiple of 1/2 and >= -1/2");
  }
}

double direct_series(double s, double y) {
  double sum = 0.0;
  double p = 1.0;
  for (int k = 1; k < 200000; ++k) {
    p *= y;
    const double term = p * std::pow(static_cast<double>(k), -s);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) || std::abs(term) < 1e-300) break;
  }
  return sum;
}

// Sum_{k>=1} y^k k^{-s} for 0 < y <= 1: K-1 direct terms, then Euler-Maclaurin on the rest.
double euler_maclaurin_series(double s, double y) {
  const double lambda = (y == 1.0) ? 0.0 : -std::log(y);
  const int K = kEulerMaclaurinStart;
  double head = 0.0;
  for (int k = 1; k < K; ++k) head += std::exp(-lambda * k) * std::pow(static_cast<double>(k), -s);

  const double kd = K;
  const double decay = std::exp(-lambda * kd);
  double tail = std::pow(kd, 1.0 - s) * expint_e(s, lambda * kd);
  tail += 0.5 * decay * std::pow(kd, -s);

  // B_{2j} / (2j)!
  static constexpr std::array<double, 6> kBernoulliOverFactorial = {
      1.0 / 12.0,           -1.0 / 720.0,          1.0 / 30240.0,
      -1.0 / 1209600.0,     1.0 / 47900160.0,      -691.0 / 1307674368000.0,
  };
  for (int j = 1; j <= 6; ++j) {
    const int m = 2 * j - 1;
    // m-th derivative of e^{-lambda t} t^{-s} at t = K
    double deriv = 0.0;
    double binom = 1.0;
    double rising = 1.0;  // (s)_i
    for (int i = 0; i <= m; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      deriv += binom * std::pow(-lambda, m - i) * sign * rising * std::pow(kd, -s - i);
      binom = binom * (m - i) / (i + 1);
      rising *= (s + i);
    }
    tail -= kBernoulliOverFactorial[j - 1] * decay * deriv;
  }
  return head + tail;
}

double zeta_uncached(double s) { return euler_maclaurin_series(s, 1.0); }

// 1 / (1 + e^{-x}) and its derivative, without overflow.
double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}
double logistic_slope(double x) {
  const double e = std::exp(-std::abs(x));
  return e / ((1.0 + e) * (1.0 + e));
}

// Li_s(-e^mu) for mu well past the Fermi edge, where a single rescaled rule cannot resolve the
// step at t = mu. Li_s(-e^mu) = -(1/Gamma(s)) int t^{s-1} sigma(mu - t) dt on 16-point
// Gauss-Legendre panels of width <= 2 over [mu - 40, mu + 40]; t = w^2 on [0, 2] removes the
// t^{s-1} branch point. s = -1/2 is the mu-derivative of s = 1/2 (kernel sigma').
void degenerate_fermi(double mu, std::span<const double> orders, std::span<double> out) {
  using GL = boost::math::quadrature::gauss<double, 16>;
  constexpr double kReach = 40.0;
  struct Node {
    double t;
    double jac;  // dt weight; 2w dw on the origin panel
    bool origin;
  };
  std::vector<Node> nodes;
  nodes.reserve(16 * 44);
  auto panel = [&](double a, double b, bool origin) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double u = c + sgn * h * x[i];
        nodes.push_back(origin ? Node{u * u, 2.0 * u * h * w[i], true} : Node{u, h * w[i], false});
      }
    }
  };
  const double lo = std::max(0.0, mu - kReach), hi = mu + kReach;
  double start = lo;
  if (lo == 0.0) {
    panel(0.0, std::sqrt(2.0), true);
    start = 2.0;
  }
  const int n = static_cast<int>(std::ceil((hi - start) / 2.0));
  for (int k = 0; k < n; ++k) panel(start + (hi - start) * k / n, start + (hi - start) * (k + 1) / n, false);

  std::vector<double> k0(nodes.size()), k1(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    k0[i] = logistic(mu - nodes[i].t);
    k1[i] = logistic_slope(mu - nodes[i].t);
  }
  for (std::size_t j = 0; j < orders.size(); ++j) {
    const double s = orders[j];
    if (s == 0.0) {
      out[j] = -logistic(mu);
      continue;
    }
    const bool slope = s < 0.0;
    const double p = slope ? -0.5 : s - 1.0;
    const std::vector<double>& kern = slope ? k1 : k0;
    // below lo the kernel is 1 (sigma) or 0 (sigma') to e^{-40}
    double sum = slope ? 0.0 : std::pow(lo, p + 1.0) / (p + 1.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double tp = p == 0.0 ? 1.0 : std::pow(nodes[i].t, p);
      sum += nodes[i].jac * tp * kern[i];
    }
    out[j] = -sum / half_integer_gamma(slope ? 0.5 : s);
  }
}

}  // namespace

double beta_scale(double y) {
  if (std::isnan(y) || y == 0.0 || y > 1.0) {
    throw InvalidArgumentError("beta_scale requires y in (-inf, 0) U (0, 1]");
  }
  return y > 0.0 ? 2.0 - 1.8 * y : 1.0 + std::exp(y);
}

double half_integer_gamma(double s) {
  if (!is_half_multiple(s) || s <= 0.0) {
    throw InvalidArgumentError("half_integer_gamma requires a positive multiple of 1/2");
  }
  double g = 1.0;
  double x = 1.0;
  if (!is_integer(s)) {
    g = std::sqrt(std::numbers::pi);
    x = 0.5;
  }
  for (; x < s - 0.25; x += 1.0) g *= x;
  return g;
}

double expint_e(double s, double z) {
  if (!(z >= 0.0)) throw InvalidArgumentError("expint_e requires z >= 0");
  if (z == 0.0) {
    if (s <= 1.0) throw InvalidArgumentError("E_s(0) diverges for s <= 1");
    return 1.0 / (s - 1.0);
  }
  const double nu = s - std::floor(s);
  double v;
  double e;
  if (nu == 0.0) {
    v = 1.0;
    e = -std::expint(-z);
  } else if (nu == 0.5) {
    v = 0.5;
    e = std::sqrt(std::numbers::pi / z) * std::erfc(std::sqrt(z));
  } else {
    v = nu;
    e = std::pow(z, nu - 1.0) * boost::math::tgamma(1.0 - nu, z);
  }
  const double ez = std::exp(-z);
  while (v < s - 0.25) {
    e = (ez - z * e) / v;
    v += 1.0;
  }
  while (v > s + 0.25) {
    e = (ez - (v - 1.0) * e) / z;
    v -= 1.0;
  }
  return e;
}

PolylogEngine::PolylogEngine(int n_int) : n_int_(n_int) {
  const QuadratureRule& gh = cached_rule(n_int);
  std::vector<double> w;
  for (std::size_t k = 0; k < gh.size(); ++k) {
    const double x = gh.nodes[k];
    if (x < 0.0) continue;
    hermite_.tau.push_back(x * x);
    w.push_back(gh.scaled_weights[k] * (x > 0.0 ? 2.0 : 1.0));
  }
  auto fill = [](Table& t, const std::vector<double>& weights) {
    t.log_tau.resize(t.tau.size());
    for (std::size_t k = 0; k < t.tau.size(); ++k) {
      t.log_tau[k] = t.tau[k] > 0.0 ? std::log(t.tau[k]) : -std::numeric_limits<double>::infinity();
    }
    t.rows.assign(kPowerRows, std::vector<double>(t.tau.size()));
    for (std::size_t k = 0; k < t.tau.size(); ++k) {
      double v = weights[k];
      for (int p = 0; p < kPowerRows; ++p) {
        t.rows[p][k] = v;
        v *= t.tau[k];
      }
    }
  };
  fill(hermite_, w);

  const QuadratureRule& gl = cached_laguerre_rule((n_int + 2) / 2);
  laguerre_.tau = gl.nodes;
  fill(laguerre_, gl.scaled_weights);
  if (hermite_.tau.size() > kMaxFolded || laguerre_.tau.size() > kMaxFolded) {
    throw InvalidArgumentError("integration order too large for the polylog engine");
  }
}

const double* PolylogEngine::row(const Table& t, int p, std::vector<double>& scratch) const {
  if (p < kPowerRows) return t.rows[p].data();
  scratch.resize(t.tau.size());
  for (std::size_t k = 0; k < t.tau.size(); ++k) {
    scratch[k] = t.tau[k] > 0.0 ? t.rows[0][k] * std::exp(p * t.log_tau[k]) : 0.0;
  }
  return scratch.data();
}

double PolylogEngine::value(double s, double y) const {
  double out = 0.0;
  evaluate(y, std::span<const double>(&s, 1), std::span<double>(&out, 1));
  return out;
}

void PolylogEngine::evaluate(double y, std::span<const double> orders,
                             std::span<double> out) const {
  if (orders.size() != out.size()) throw InvalidArgumentError("polylog batch size mismatch");
  if (std::isnan(y)) throw NumericalError("polylog argument is NaN");
  if (y > 1.0) throw InvalidArgumentError("polylog argument must satisfy y <= 1");
  for (double s : orders) check_order(s);

  if (y == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (y == 1.0) {
    for (std::size_t i = 0; i < orders.size(); ++i) out[i] = zeta(orders[i]);
    return;
  }
  if (y < kDegenerateFermiThreshold) {
    degenerate_fermi(std::log(-y), orders, out);
    return;
  }
  if (y > kPolylogSeriesThreshold) {
    for (std::size_t i = 0; i < orders.size(); ++i) {
      const double s = orders[i];
      out[i] = (s == 0.0) ? y / (1.0 - y) : euler_maclaurin_series(s, y);
    }
    return;
  }

  const double beta = beta_scale(y);
  const double scale = 0.5 * beta;
  bool need_h = false, need_l = false;
  for (double s : orders) {
    if (s == 0.0) continue;
    if (is_integer(s)) need_l = true;
    else need_h = true;
  }
  alignas(32) std::array<double, kMaxFolded> eh;
  alignas(32) std::array<double, kMaxFolded> el;
  const KernelTable& kt = kernels();
  const std::size_t nh = hermite_.tau.size();
  const std::size_t nl = laguerre_.tau.size();
  if (need_h) kt.bose_fermi_denominator(hermite_.tau.data(), scale, y, eh.data(), nh);
  if (need_l) kt.bose_fermi_denominator(laguerre_.tau.data(), scale, y, el.data(), nl);

  std::vector<double> scratch;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const double s = orders[i];
    double v;
    if (s == 0.0) {
      v = y / (1.0 - y);
    } else if (s == -0.5) {
      // y d/dy of the s = 1/2 sum at fixed beta
      alignas(32) std::array<double, kMaxFolded> e2;
      for (std::size_t k = 0; k < nh; ++k) e2[k] = eh[k] * eh[k];
      const double s1 = kt.dot(hermite_.rows[0].data(), eh.data(), nh);
      const double s2 = kt.dot(hermite_.rows[0].data(), e2.data(), nh);
      v = y * std::sqrt(scale / std::numbers::pi) * (s1 + y * s2);
    } else if (is_integer(s)) {
      const int p = static_cast<int>(s) - 1;
      v = y * std::pow(scale, s) / half_integer_gamma(s) *
          kt.dot(row(laguerre_, p, scratch), el.data(), nl);
    } else {
      const int p = static_cast<int>(s - 0.5);
      v = y * std::pow(scale, s) / half_integer_gamma(s) *
          kt.dot(row(hermite_, p, scratch), eh.data(), nh);
    }
    if (!std::isfinite(v)) throw NumericalError("non-finite polylog value");
    out[i] = v;
  }
}

const PolylogEngine& default_polylog() {
  static const PolylogEngine engine(kDefaultIntegrationOrder);
  return engine;
}

double polylog(double s, double y) {
  if (!is_half_multiple(s) || s < 1.0) {
    throw InvalidArgumentError("polylog requires s >= 1 with 2s an integer");
  }
  return default_polylog().value(s, y);
}

double polylog_derivative(double s, double y) {
  if (y == 0.0) throw InvalidArgumentError("polylog_derivative is evaluated as Li_{s-1}(y)/y; y = 0");
  if (!is_half_multiple(s) || s < 0.5) {
    throw InvalidArgumentError("polylog_derivative requires s >= 1/2 with 2s an integer");
  }
  return default_polylog().value(s - 1.0, y) / y;
}

double zeta(double s) {
  if (!(s > 1.0)) throw InvalidArgumentError("zeta requires s > 1");
  constexpr int kTabulated = 400;  // 2s up to this value
  static const std::vector<double> table = [] {
    std::vector<double> t(kTabulated + 1, 0.0);
    for (int k = 3; k <= kTabulated; ++k) t[k] = zeta_uncached(0.5 * k);
    return t;
  }();
  if (is_half_multiple(s) && 2.0 * s <= kTabulated) return table[static_cast<int>(2.0 * s)];
  return zeta_uncached(s);
}

double polylog_series_oracle(double s, double y) {
  if (std::isnan(y) || std::isnan(s)) throw InvalidArgumentError("NaN input");
  if (y == 0.0) return 0.0;
  if (std::abs(y) > 1.0) throw InvalidArgumentError("series diverges for |y| > 1");
  if (std::abs(y) == 1.0 && !(s > 1.0)) throw InvalidArgumentError("series diverges at |y| = 1, s <= 1");
  if (y == 1.0) return zeta_uncached(s);
  if (y < 0.0) {
    if (y >= -0.5) return direct_series(s, y);
    // Li_s(-x) = 2^{1-s} Li_s(x^2) - Li_s(x)
    return std::pow(2.0, 1.0 - s) * polylog_series_oracle(s, y * y) - polylog_series_oracle(s, -y);
  }
  if (y <= 0.5) return direct_series(s, y);
  return euler_maclaurin_series(s, y);
}

double polylog_integral_oracle(double s, double y) {
  if (!(s > 0.0)) throw InvalidArgumentError("integral oracle requires s > 0");
  if (std::isnan(y) || y > 1.0) throw InvalidArgumentError("integral oracle requires y <= 1");
  if (y == 0.0) return 0.0;
  if (y == 1.0 && s <= 1.0) throw InvalidArgumentError("integral diverges at y = 1, s <= 1");
  // x = t^2:  Li_s(y) = y / Gamma(s) * int_0^inf 2 t^{2s-1} / (e^{t^2} - y) dt
  auto f = [s, y](double t) {
    const double t2 = t * t;
    // 1 - y e^{-t^2}, written to avoid cancellation on either side of y = 0
    const double denom = y < 0.0 ? 1.0 - y * std::exp(-t2) : (1.0 - y) - y * std::expm1(-t2);
    const double pw = (2.0 * s - 1.0 == 0.0) ? 1.0 : std::pow(t, 2.0 * s - 1.0);
    return 2.0 * pw * std::exp(-t2) / denom;
  };
  const double log_scale = y < -1.0 ? std::log(-y) : 0.0;
  const double t_hi = std::sqrt(60.0 + log_scale) + 1.0;
  std::vector<double> cuts = {0.0};
  if (y > 0.5) {
    // near-singular peak at t ~ sqrt(1-y)
    const double w = std::sqrt(std::max(1.0 - y, 1e-16));
    for (double c : {w, 4.0 * w, 16.0 * w}) {
      if (c < 1.0) cuts.push_back(c);
    }
  }
  if (log_scale > 1.0) {
    // Fermi edge at t^2 = ln(-y) with width O(1) in t^2
    for (double d : {-20.0, -8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0, 20.0}) {
      if (log_scale + d > 0.0) cuts.push_back(std::sqrt(log_scale + d));
    }
  }
  cuts.push_back(t_hi);
  double total = 0.0;
  double err_total = 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    total += GK::integrate(f, cuts[i], cuts[i + 1], 15, 1e-13, &err);
    err_total += err;
  }
  if (!(err_total <= 1e-11 * std::abs(total))) {
    throw ConvergenceError("integral oracle did not reach its tolerance");
  }
  return y / std::tgamma(s) * total;
}

}  // namespace qbgk
