#pragma once

// Data-parallel inner loops of the scoring pipeline. Every kernel has a scalar
// reference and, where the build and the host CPU allow it, an AVX2 variant.
// Variants are bit-identical: the reductions fix their association order
// (four interleaved partial sums) so the vector code can reproduce it.

#include <cstdint>
#include <span>
#include <string_view>

namespace qrisk::kernels {

/// A multiplier as units / scale. When the shortest decimal form of m has at
/// most nine fractional digits, units is an integer and scale a power of ten,
/// so (T * E * units) / scale is the correctly rounded decimal product
/// (6 * 1.2 gives 7.2, not 7.199999999999999). Otherwise {m, 1}.
struct ScaledMultiplier {
  double units = 1.0;
  double scale = 1.0;
};

ScaledMultiplier scale_multiplier(double multiplier);

struct KernelTable {
  std::string_view name;
  // out[i] = ((threat[i] * exposure[i]) * units[i]) / scale[i]
  void (*step_likelihoods)(std::span<const std::int32_t> threat,
                           std::span<const std::int32_t> exposure,
                           std::span<const double> units, std::span<const double> scale,
                           std::span<double> out);
  // out[i] = min(1, likelihood[i] / 25)
  void (*step_probabilities)(std::span<const double> likelihood, std::span<double> out);
  double (*max_value)(std::span<const double> values);
  double (*sum)(std::span<const double> values);
};

const KernelTable& scalar();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2();

/// Best table for this host. QRISK_KERNELS=scalar in the environment forces
/// the reference path.
const KernelTable& active();

}  // namespace qrisk::kernels
