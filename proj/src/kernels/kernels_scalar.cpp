#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace qbgk::detail {
namespace {

void exp_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void denominator_scalar(const double* tau, double scale, double y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / (std::exp(scale * tau[i]) - y);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void flux_divergence_scalar(const double* fm, const double* fp, double scale, double* acc,
                            std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] -= scale * (fp[i] - fm[i]);
}

void tri_apply_scalar(const TriStencil& s, const double* f, double* out) {
  for (std::size_t i = 0; i < s.n; ++i) {
    out[i] = s.up_coef[i] * f[s.up[i]] + s.diag * f[i] + s.down_coef[i] * f[s.down[i]];
  }
}

void hll_scalar(const double* fl, const double* fr, const double* afl, const double* afr,
                double sl, double sr, double* out, std::size_t n) {
  const double inv = 1.0 / (sr - sl);
  const double slsr = sl * sr;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (sr * afl[i] - sl * afr[i] + slsr * (fr[i] - fl[i])) * inv;
  }
}

void upwind_scalar(const double* v, const double* fl, const double* fr, double* out,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::max(v[i], 0.0) * fl[i] + std::min(v[i], 0.0) * fr[i];
  }
}

void relax_scalar(const double* fs, const double* m, double k, double* out, std::size_t n) {
  const double inv = 1.0 / (1.0 + k);
  for (std::size_t i = 0; i < n; ++i) out[i] = (fs[i] + k * m[i]) * inv;
}

void relax_trap_scalar(const double* rhs, const double* mn, const double* mo, const double* fo,
                       double k, double* out, std::size_t n) {
  const double inv = 1.0 / (1.0 + k);
  for (std::size_t i = 0; i < n; ++i) out[i] = (rhs[i] + k * (mn[i] + mo[i] - fo[i])) * inv;
}

inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

void minmod_scalar(const double* fm, const double* f0, const double* fp, double* left,
                   double* right, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double half = 0.5 * minmod(f0[i] - fm[i], fp[i] - f0[i]);
    left[i] = f0[i] - half;
    right[i] = f0[i] + half;
  }
}

// Jiang-Shu reconstruction at the face between a and b (upwind side a..c).
inline double weno5_face(double a, double b, double c, double d, double e) {
  const double q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
  const double q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
  const double q2 = (2.0 * c + 5.0 * d - e) / 6.0;
  const double t0 = a - 2.0 * b + c, u0 = a - 4.0 * b + 3.0 * c;
  const double t1 = b - 2.0 * c + d, u1 = b - d;
  const double t2 = c - 2.0 * d + e, u2 = 3.0 * c - 4.0 * d + e;
  const double b0 = 13.0 / 12.0 * t0 * t0 + 0.25 * u0 * u0;
  const double b1 = 13.0 / 12.0 * t1 * t1 + 0.25 * u1 * u1;
  const double b2 = 13.0 / 12.0 * t2 * t2 + 0.25 * u2 * u2;
  const double e0 = kWenoEpsilon + b0, e1 = kWenoEpsilon + b1, e2 = kWenoEpsilon + b2;
  const double a0 = 0.1 / (e0 * e0);
  const double a1 = 0.6 / (e1 * e1);
  const double a2 = 0.3 / (e2 * e2);
  return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2);
}

void weno5_scalar(const double* fmm, const double* fm, const double* f0, const double* fp,
                  const double* fpp, double* left, double* right, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    right[i] = weno5_face(fmm[i], fm[i], f0[i], fp[i], fpp[i]);
    left[i] = weno5_face(fpp[i], fp[i], f0[i], fm[i], fmm[i]);
  }
}

void maxwellian_scalar(const double* const* vel, int dims, const double* u, double temperature,
                       double z, double theta0, double* out, std::size_t n) {
  const double inv2t = 0.5 / temperature;
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0;
    for (int d = 0; d < dims; ++d) {
      const double c = vel[d][i] - u[d];
      a += c * c;
    }
    const double g = z * std::exp(-a * inv2t);
    out[i] = g / (1.0 + theta0 * g);
  }
}

}  // namespace

const KernelTable kScalarTable = {
    "scalar",         exp_scalar,         denominator_scalar, dot_scalar,
    axpy_scalar,      flux_divergence_scalar, tri_apply_scalar, hll_scalar,
    upwind_scalar,    relax_scalar,       relax_trap_scalar,  minmod_scalar,
    weno5_scalar,     maxwellian_scalar,
};

}  // namespace qbgk::detail
