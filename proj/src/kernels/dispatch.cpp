#include <atomic>
#include <cstdlib>

#include "kernels_internal.hpp"

namespace qbgk {
namespace {

std::atomic<const KernelTable*> g_override{nullptr};

const KernelTable& auto_select() {
  static const KernelTable* chosen = [] {
    const char* force = std::getenv("QBGK_FORCE_SCALAR");
    if (force != nullptr && force[0] != '\0' && force[0] != '0') return &detail::kScalarTable;
    if (const KernelTable* t = avx2_kernels()) return t;
    return &detail::kScalarTable;
  }();
  return *chosen;
}

}  // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* avx2_kernels() {
#if defined(QBGK_HAVE_AVX2)
  static const bool ok = cpu_supports_avx2();
  return ok ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() {
  if (const KernelTable* t = g_override.load(std::memory_order_acquire)) return *t;
  return auto_select();
}

void set_kernels(const KernelTable* table) { g_override.store(table, std::memory_order_release); }

}  // namespace qbgk
