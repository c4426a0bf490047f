// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>

#include "kernels_internal.hpp"

namespace qrisk::kernels {

namespace {

using detail::kLanes;

void step_likelihoods_avx2(std::span<const std::int32_t> threat,
                           std::span<const std::int32_t> exposure,
                           std::span<const double> units, std::span<const double> scale,
                           std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m128i t = _mm_loadu_si128(reinterpret_cast<const __m128i*>(threat.data() + i));
    const __m128i e = _mm_loadu_si128(reinterpret_cast<const __m128i*>(exposure.data() + i));
    const __m256d te = _mm256_mul_pd(_mm256_cvtepi32_pd(t), _mm256_cvtepi32_pd(e));
    const __m256d scaled = _mm256_mul_pd(te, _mm256_loadu_pd(units.data() + i));
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(scaled, _mm256_loadu_pd(scale.data() + i)));
  }
  for (; i < n; ++i) {
    out[i] = ((static_cast<double>(threat[i]) * static_cast<double>(exposure[i])) * units[i]) /
             scale[i];
  }
}

void step_probabilities_avx2(std::span<const double> likelihood, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d scale = _mm256_set1_pd(detail::kProbabilityScale);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d p = _mm256_div_pd(_mm256_loadu_pd(likelihood.data() + i), scale);
    // minpd(p, 1) returns the second operand on NaN, matching std::min(1.0, p).
    _mm256_storeu_pd(out.data() + i, _mm256_min_pd(p, one));
  }
  for (; i < n; ++i) out[i] = std::min(1.0, likelihood[i] / detail::kProbabilityScale);
}

double max_value_avx2(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < kLanes) {
    double best = values[0];
    for (std::size_t i = 1; i < n; ++i) best = std::max(best, values[i]);
    return best;
  }
  __m256d best4 = _mm256_loadu_pd(values.data());
  std::size_t i = kLanes;
  for (; i + kLanes <= n; i += kLanes) {
    best4 = _mm256_max_pd(best4, _mm256_loadu_pd(values.data() + i));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, best4);
  double best = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) best = std::max(best, values[i]);
  return best;
}

double sum_avx2(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t blocked = n - n % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(values.data() + i));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t i = blocked; i < n; ++i) total += values[i];
  return total;
}

}  // namespace

namespace detail {

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", step_likelihoods_avx2, step_probabilities_avx2,
                                 max_value_avx2, sum_avx2};
  return table;
}

}  // namespace detail

}  // namespace qrisk::kernels
