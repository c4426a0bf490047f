#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "kernels_internal.hpp"

namespace qrisk::kernels {

namespace {

using detail::kLanes;

void step_likelihoods_scalar(std::span<const std::int32_t> threat,
                             std::span<const std::int32_t> exposure,
                             std::span<const double> units, std::span<const double> scale,
                             std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = ((static_cast<double>(threat[i]) * static_cast<double>(exposure[i])) * units[i]) /
             scale[i];
  }
}

void step_probabilities_scalar(std::span<const double> likelihood, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::min(1.0, likelihood[i] / detail::kProbabilityScale);
  }
}

double max_value_scalar(std::span<const double> values) {
  double best = values[0];
  for (double v : values.subspan(1)) best = std::max(best, v);
  return best;
}

// Four interleaved partial sums combined as (s0 + s1) + (s2 + s3), then the
// tail added in order. The AVX2 variant reproduces this association exactly.
double sum_scalar(std::span<const double> values) {
  std::array<double, kLanes> acc{};
  const std::size_t blocked = values.size() - values.size() % kLanes;
  for (std::size_t i = 0; i < blocked; i += kLanes) {
    for (std::size_t lane = 0; lane < kLanes; ++lane) acc[lane] += values[i + lane];
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = blocked; i < values.size(); ++i) total += values[i];
  return total;
}

constexpr int kMaxFractionDigits = 9;

}  // namespace

ScaledMultiplier scale_multiplier(double multiplier) {
  if (!std::isfinite(multiplier) || !(multiplier > 1e-9) || multiplier > 1e6) {
    return {multiplier, 1.0};
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, multiplier, std::chars_format::fixed);
  if (res.ec != std::errc{}) return {multiplier, 1.0};

  double units = 0.0;
  double scale = 1.0;
  int fraction_digits = -1;
  for (const char* p = buf; p != res.ptr; ++p) {
    if (*p == '.') {
      fraction_digits = 0;
      continue;
    }
    units = units * 10.0 + static_cast<double>(*p - '0');
    if (fraction_digits >= 0) {
      if (++fraction_digits > kMaxFractionDigits) return {multiplier, 1.0};
      scale *= 10.0;
    }
  }
  return {units, scale};
}

const KernelTable& scalar() {
  static const KernelTable table{"scalar", step_likelihoods_scalar, step_probabilities_scalar,
                                 max_value_scalar, sum_scalar};
  return table;
}

}  // namespace qrisk::kernels
