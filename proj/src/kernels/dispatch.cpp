#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace qrisk::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* forced = std::getenv("QRISK_KERNELS");
      forced != nullptr && std::string_view(forced) == "scalar") {
    return scalar();
  }
  if (const auto* table = avx2()) return *table;
  return scalar();
}

}  // namespace

const KernelTable* avx2() {
#if defined(QRISK_HAVE_AVX2)
  if (cpu_has_avx2()) return &detail::avx2_table();
#endif
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace qrisk::kernels
