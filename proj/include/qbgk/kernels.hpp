#pragma once

#include <cstddef>
#include <cstdint>

namespace qbgk {

// Sparse three-term operator: out[i] = up_coef[i]*f[up[i]] + diag*f[i] + down_coef[i]*f[down[i]].
// Missing neighbours point at i with a zero coefficient.
struct TriStencil {
  const std::int32_t* up = nullptr;
  const double* up_coef = nullptr;
  const std::int32_t* down = nullptr;
  const double* down_coef = nullptr;
  double diag = 0.0;
  std::size_t n = 0;
};

struct KernelTable {
  const char* name;

  // out[i] = exp(x[i])
  void (*exp)(const double* x, double* out, std::size_t n);
  // out[i] = 1 / (exp(scale * tau[i]) - y)
  void (*bose_fermi_denominator)(const double* tau, double scale, double y, double* out,
                                 std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // acc -= scale * (f_plus - f_minus)
  void (*flux_divergence)(const double* f_minus, const double* f_plus, double scale, double* acc,
                          std::size_t n);
  void (*tri_apply)(const TriStencil& s, const double* f, double* out);
  // out = (s_r*af_l - s_l*af_r + s_l*s_r*(f_r - f_l)) / (s_r - s_l)
  void (*hll_combine)(const double* f_l, const double* f_r, const double* af_l,
                      const double* af_r, double s_l, double s_r, double* out, std::size_t n);
  // out[i] = max(v[i],0)*f_l[i] + min(v[i],0)*f_r[i]
  void (*upwind_flux)(const double* v, const double* f_l, const double* f_r, double* out,
                      std::size_t n);
  // out = (f_star + k*m) / (1 + k)
  void (*relax)(const double* f_star, const double* m, double k, double* out, std::size_t n);
  // out = (rhs + k*(m_new + m_old - f_old)) / (1 + k)
  void (*relax_trapezoidal)(const double* rhs, const double* m_new, const double* m_old,
                            const double* f_old, double k, double* out, std::size_t n);
  // Face values of cell i from the stencil (i-1, i, i+1): left = value at i-1/2, right = i+1/2.
  void (*minmod_faces)(const double* fm, const double* f0, const double* fp, double* left,
                       double* right, std::size_t n);
  void (*weno5_faces)(const double* fmm, const double* fm, const double* f0, const double* fp,
                      const double* fpp, double* left, double* right, std::size_t n);
  // out[i] = z e^{-a} / (1 + theta0 z e^{-a}),  a = sum_d (vel[d][i]-u[d])^2 / (2T)
  void (*quantum_maxwellian)(const double* const* vel, int dims, const double* u, double temperature,
                             double z, double theta0, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();
// Null when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

// Active table: AVX2 when available unless QBGK_FORCE_SCALAR is set in the environment.
const KernelTable& kernels();
// Overrides the active table (tests and benchmarks). Passing nullptr restores auto-selection.
void set_kernels(const KernelTable* table);

bool cpu_supports_avx2();

inline constexpr double kWenoEpsilon = 1e-6;

}  // namespace qbgk
