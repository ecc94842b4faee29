#pragma once

#include "qbgk/kernels.hpp"

namespace qbgk::detail {

extern const KernelTable kScalarTable;
#if defined(QBGK_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace qbgk::detail
