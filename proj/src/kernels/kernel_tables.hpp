#pragma once

#include "vsumm/kernels.hpp"

namespace vsumm::kernels::detail {

extern const KernelTable scalar_table;
#if defined(VSUMM_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif

}  // namespace vsumm::kernels::detail
