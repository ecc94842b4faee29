// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace qbgk::detail {
namespace {

inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2lo = _mm256_set1_pd(1.42860682030941723212e-6);
  // below -708 the result would be subnormal; flush it to zero
  const __m256d keep = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_GE_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-708.0)), _mm256_set1_pd(709.0));
  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2hi, x);
  r = _mm256_fnmadd_pd(n, ln2lo, r);
  // Taylor series to r^13; |r| <= ln2/2.
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  __m256i e = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  e = _mm256_slli_epi64(_mm256_add_epi64(e, _mm256_set1_epi64x(1023)), 52);
  return _mm256_and_pd(keep, _mm256_mul_pd(p, _mm256_castsi256_pd(e)));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void exp_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void denominator_avx2(const double* tau, double scale, double y, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale), vy = _mm256_set1_pd(y), one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ex = exp_pd(_mm256_mul_pd(vs, _mm256_loadu_pd(tau + i)));
    _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_sub_pd(ex, vy)));
  }
  for (; i < n; ++i) out[i] = 1.0 / (std::exp(scale * tau[i]) - y);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void flux_divergence_avx2(const double* fm, const double* fp, double scale, double* acc,
                          std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(fp + i), _mm256_loadu_pd(fm + i));
    _mm256_storeu_pd(acc + i, _mm256_fnmadd_pd(vs, d, _mm256_loadu_pd(acc + i)));
  }
  for (; i < n; ++i) acc[i] -= scale * (fp[i] - fm[i]);
}

void tri_apply_avx2(const TriStencil& s, const double* f, double* out) {
  const __m256d diag = _mm256_set1_pd(s.diag);
  std::size_t i = 0;
  for (; i + 4 <= s.n; i += 4) {
    const __m128i iu = _mm_loadu_si128(reinterpret_cast<const __m128i*>(s.up + i));
    const __m128i id = _mm_loadu_si128(reinterpret_cast<const __m128i*>(s.down + i));
    const __m256d fu = _mm256_i32gather_pd(f, iu, 8);
    const __m256d fd = _mm256_i32gather_pd(f, id, 8);
    __m256d r = _mm256_mul_pd(diag, _mm256_loadu_pd(f + i));
    r = _mm256_fmadd_pd(_mm256_loadu_pd(s.up_coef + i), fu, r);
    r = _mm256_fmadd_pd(_mm256_loadu_pd(s.down_coef + i), fd, r);
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < s.n; ++i) {
    out[i] = s.up_coef[i] * f[s.up[i]] + s.diag * f[i] + s.down_coef[i] * f[s.down[i]];
  }
}

void hll_avx2(const double* fl, const double* fr, const double* afl, const double* afr, double sl,
              double sr, double* out, std::size_t n) {
  const double inv = 1.0 / (sr - sl);
  const __m256d vsr = _mm256_set1_pd(sr), vsl = _mm256_set1_pd(sl);
  const __m256d vslsr = _mm256_set1_pd(sl * sr), vinv = _mm256_set1_pd(inv);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_mul_pd(vsr, _mm256_loadu_pd(afl + i));
    r = _mm256_fnmadd_pd(vsl, _mm256_loadu_pd(afr + i), r);
    const __m256d jump = _mm256_sub_pd(_mm256_loadu_pd(fr + i), _mm256_loadu_pd(fl + i));
    r = _mm256_fmadd_pd(vslsr, jump, r);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(r, vinv));
  }
  for (; i < n; ++i) out[i] = (sr * afl[i] - sl * afr[i] + sl * sr * (fr[i] - fl[i])) * inv;
}

void upwind_avx2(const double* v, const double* fl, const double* fr, double* out,
                 std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vv = _mm256_loadu_pd(v + i);
    const __m256d r = _mm256_mul_pd(_mm256_max_pd(vv, zero), _mm256_loadu_pd(fl + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(_mm256_min_pd(vv, zero), _mm256_loadu_pd(fr + i), r));
  }
  for (; i < n; ++i) out[i] = (v[i] > 0.0 ? v[i] : 0.0) * fl[i] + (v[i] < 0.0 ? v[i] : 0.0) * fr[i];
}

void relax_avx2(const double* fs, const double* m, double k, double* out, std::size_t n) {
  const double inv = 1.0 / (1.0 + k);
  const __m256d vk = _mm256_set1_pd(k), vinv = _mm256_set1_pd(inv);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(vk, _mm256_loadu_pd(m + i), _mm256_loadu_pd(fs + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(r, vinv));
  }
  for (; i < n; ++i) out[i] = (fs[i] + k * m[i]) * inv;
}

void relax_trap_avx2(const double* rhs, const double* mn, const double* mo, const double* fo,
                     double k, double* out, std::size_t n) {
  const double inv = 1.0 / (1.0 + k);
  const __m256d vk = _mm256_set1_pd(k), vinv = _mm256_set1_pd(inv);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_sub_pd(_mm256_add_pd(_mm256_loadu_pd(mn + i), _mm256_loadu_pd(mo + i)),
                                    _mm256_loadu_pd(fo + i));
    const __m256d r = _mm256_fmadd_pd(vk, s, _mm256_loadu_pd(rhs + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(r, vinv));
  }
  for (; i < n; ++i) out[i] = (rhs[i] + k * (mn[i] + mo[i] - fo[i])) * inv;
}

inline __m256d abs_pd(__m256d a) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), a);
}

void minmod_avx2(const double* fm, const double* f0, const double* fp, double* left,
                 double* right, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd(), half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(f0 + i);
    const __m256d a = _mm256_sub_pd(c, _mm256_loadu_pd(fm + i));
    const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(fp + i), c);
    const __m256d smaller_a = _mm256_cmp_pd(abs_pd(a), abs_pd(b), _CMP_LT_OQ);
    __m256d m = _mm256_blendv_pd(b, a, smaller_a);
    const __m256d same_sign = _mm256_cmp_pd(_mm256_mul_pd(a, b), zero, _CMP_GT_OQ);
    m = _mm256_and_pd(m, same_sign);
    const __m256d h = _mm256_mul_pd(half, m);
    _mm256_storeu_pd(left + i, _mm256_sub_pd(c, h));
    _mm256_storeu_pd(right + i, _mm256_add_pd(c, h));
  }
  for (; i < n; ++i) {
    const double a = f0[i] - fm[i], b = fp[i] - f0[i];
    double m = 0.0;
    if (a * b > 0.0) m = std::abs(a) < std::abs(b) ? a : b;
    left[i] = f0[i] - 0.5 * m;
    right[i] = f0[i] + 0.5 * m;
  }
}

inline __m256d weno5_face_pd(__m256d a, __m256d b, __m256d c, __m256d d, __m256d e) {
  const __m256d two = _mm256_set1_pd(2.0), three = _mm256_set1_pd(3.0);
  const __m256d four = _mm256_set1_pd(4.0), five = _mm256_set1_pd(5.0);
  const __m256d sixth = _mm256_set1_pd(1.0 / 6.0);
  const __m256d c1312 = _mm256_set1_pd(13.0 / 12.0), quarter = _mm256_set1_pd(0.25);
  const __m256d eps = _mm256_set1_pd(kWenoEpsilon);
  // q0 = (2a - 7b + 11c)/6, q1 = (-b + 5c + 2d)/6, q2 = (2c + 5d - e)/6
  const __m256d q0 = _mm256_mul_pd(
      _mm256_fmadd_pd(_mm256_set1_pd(11.0), c,
                      _mm256_fnmadd_pd(_mm256_set1_pd(7.0), b, _mm256_mul_pd(two, a))),
      sixth);
  const __m256d q1 = _mm256_mul_pd(_mm256_fmadd_pd(two, d, _mm256_fmsub_pd(five, c, b)), sixth);
  const __m256d q2 = _mm256_mul_pd(_mm256_sub_pd(_mm256_fmadd_pd(five, d, _mm256_mul_pd(two, c)), e),
                                   sixth);
  const __m256d t0 = _mm256_add_pd(_mm256_fnmadd_pd(two, b, a), c);
  const __m256d u0 = _mm256_fmadd_pd(three, c, _mm256_fnmadd_pd(four, b, a));
  const __m256d t1 = _mm256_add_pd(_mm256_fnmadd_pd(two, c, b), d);
  const __m256d u1 = _mm256_sub_pd(b, d);
  const __m256d t2 = _mm256_add_pd(_mm256_fnmadd_pd(two, d, c), e);
  const __m256d u2 = _mm256_add_pd(_mm256_fnmadd_pd(four, d, _mm256_mul_pd(three, c)), e);
  const __m256d b0 = _mm256_fmadd_pd(c1312, _mm256_mul_pd(t0, t0), _mm256_mul_pd(quarter, _mm256_mul_pd(u0, u0)));
  const __m256d b1 = _mm256_fmadd_pd(c1312, _mm256_mul_pd(t1, t1), _mm256_mul_pd(quarter, _mm256_mul_pd(u1, u1)));
  const __m256d b2 = _mm256_fmadd_pd(c1312, _mm256_mul_pd(t2, t2), _mm256_mul_pd(quarter, _mm256_mul_pd(u2, u2)));
  const __m256d e0 = _mm256_add_pd(eps, b0), e1 = _mm256_add_pd(eps, b1), e2 = _mm256_add_pd(eps, b2);
  const __m256d a0 = _mm256_div_pd(_mm256_set1_pd(0.1), _mm256_mul_pd(e0, e0));
  const __m256d a1 = _mm256_div_pd(_mm256_set1_pd(0.6), _mm256_mul_pd(e1, e1));
  const __m256d a2 = _mm256_div_pd(_mm256_set1_pd(0.3), _mm256_mul_pd(e2, e2));
  const __m256d num = _mm256_fmadd_pd(a2, q2, _mm256_fmadd_pd(a1, q1, _mm256_mul_pd(a0, q0)));
  return _mm256_div_pd(num, _mm256_add_pd(_mm256_add_pd(a0, a1), a2));
}

double weno5_face_scalar(double a, double b, double c, double d, double e) {
  const double q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
  const double q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
  const double q2 = (2.0 * c + 5.0 * d - e) / 6.0;
  const double t0 = a - 2.0 * b + c, u0 = a - 4.0 * b + 3.0 * c;
  const double t1 = b - 2.0 * c + d, u1 = b - d;
  const double t2 = c - 2.0 * d + e, u2 = 3.0 * c - 4.0 * d + e;
  const double e0 = kWenoEpsilon + 13.0 / 12.0 * t0 * t0 + 0.25 * u0 * u0;
  const double e1 = kWenoEpsilon + 13.0 / 12.0 * t1 * t1 + 0.25 * u1 * u1;
  const double e2 = kWenoEpsilon + 13.0 / 12.0 * t2 * t2 + 0.25 * u2 * u2;
  const double a0 = 0.1 / (e0 * e0), a1 = 0.6 / (e1 * e1), a2 = 0.3 / (e2 * e2);
  return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2);
}

void weno5_avx2(const double* fmm, const double* fm, const double* f0, const double* fp,
                const double* fpp, double* left, double* right, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(fmm + i), b = _mm256_loadu_pd(fm + i);
    const __m256d c = _mm256_loadu_pd(f0 + i), d = _mm256_loadu_pd(fp + i);
    const __m256d e = _mm256_loadu_pd(fpp + i);
    _mm256_storeu_pd(right + i, weno5_face_pd(a, b, c, d, e));
    _mm256_storeu_pd(left + i, weno5_face_pd(e, d, c, b, a));
  }
  for (; i < n; ++i) {
    right[i] = weno5_face_scalar(fmm[i], fm[i], f0[i], fp[i], fpp[i]);
    left[i] = weno5_face_scalar(fpp[i], fp[i], f0[i], fm[i], fmm[i]);
  }
}

void maxwellian_avx2(const double* const* vel, int dims, const double* u, double temperature,
                     double z, double theta0, double* out, std::size_t n) {
  const double inv2t = 0.5 / temperature;
  const __m256d vneg = _mm256_set1_pd(-inv2t), vz = _mm256_set1_pd(z);
  const __m256d vth = _mm256_set1_pd(theta0), one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_setzero_pd();
    for (int d = 0; d < dims; ++d) {
      const __m256d c = _mm256_sub_pd(_mm256_loadu_pd(vel[d] + i), _mm256_set1_pd(u[d]));
      a = _mm256_fmadd_pd(c, c, a);
    }
    const __m256d g = _mm256_mul_pd(vz, exp_pd(_mm256_mul_pd(a, vneg)));
    _mm256_storeu_pd(out + i, _mm256_div_pd(g, _mm256_fmadd_pd(vth, g, one)));
  }
  for (; i < n; ++i) {
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

const KernelTable kAvx2Table = {
    "avx2",      exp_avx2,         denominator_avx2, dot_avx2,
    axpy_avx2,   flux_divergence_avx2, tri_apply_avx2, hll_avx2,
    upwind_avx2, relax_avx2,       relax_trap_avx2,  minmod_avx2,
    weno5_avx2,  maxwellian_avx2,
};

}  // namespace qbgk::detail
