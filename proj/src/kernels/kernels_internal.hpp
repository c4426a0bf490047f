#pragma once

#include "qrisk/kernels.hpp"

namespace qrisk::kernels::detail {

inline constexpr double kProbabilityScale = 25.0;  // n_max^2
inline constexpr std::size_t kLanes = 4;

// Defined in kernels_avx2.cpp when QRISK_HAVE_AVX2 is set.
const KernelTable& avx2_table();

}  // namespace qrisk::kernels::detail
