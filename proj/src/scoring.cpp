#include "qrisk/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "qrisk/errors.hpp"
#include "qrisk/kernels.hpp"

namespace qrisk {

namespace {

constexpr double kProbabilityScale = static_cast<double>(kScaleMax * kScaleMax);
constexpr int kLevels = kScaleMax;

constexpr std::array<std::string_view, 5> kLikelihoodLabels{"Very unlikely", "Unlikely", "Possible",
                                                            "Likely", "Frequent"};
constexpr std::array<std::string_view, 5> kImpactLabels{"Very low", "Low", "Medium", "High",
                                                        "Very high"};

void require_positive_finite(double value, std::string_view what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(fmt::format("{} must be a positive finite number, got {}", what, value));
  }
}

RiskMatrix::Cells standard_cells() {
  using enum RiskBand;
  // Bands by [L-1][I-1].
  constexpr RiskBand bands[5][5] = {
      {Low, Low, Low, Medium, Medium},
      {Low, Low, Medium, Medium, Medium},
      {Low, Medium, Medium, Medium, High},
      {Medium, Medium, Medium, High, High},
      {Medium, Medium, High, High, High},
  };
  RiskMatrix::Cells cells{};
  for (int l = 0; l < 5; ++l) {
    for (int i = 0; i < 5; ++i) cells[l][i] = RiskCell{(l + 1) * (i + 1), bands[l][i]};
  }
  return cells;
}

}  // namespace

std::string_view to_string(AggregationMethod method) {
  switch (method) {
    case AggregationMethod::Maximum: return "max";
    case AggregationMethod::Average: return "avg";
    case AggregationMethod::GeometricMean: return "geom";
  }
  return {};
}

std::optional<AggregationMethod> parse_method(std::string_view name) {
  for (auto m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view to_string(RiskBand band) {
  switch (band) {
    case RiskBand::Low: return "Low";
    case RiskBand::Medium: return "Medium";
    case RiskBand::High: return "High";
  }
  return {};
}

std::optional<RiskBand> parse_band(std::string_view name) {
  for (auto b : {RiskBand::Low, RiskBand::Medium, RiskBand::High}) {
    if (to_string(b) == name) return b;
  }
  return std::nullopt;
}

std::string_view likelihood_label(int likelihood) {
  return in_scale(likelihood) ? kLikelihoodLabels[likelihood - 1] : std::string_view{};
}

std::string_view impact_label(int impact) {
  return in_scale(impact) ? kImpactLabels[impact - 1] : std::string_view{};
}

RiskMatrix::RiskMatrix(const Cells& cells) : cells_(cells) {
  for (int l = 0; l < kLevels; ++l) {
    for (int i = 0; i < kLevels; ++i) {
      const auto& c = cells_[l][i];
      if (c.value != (l + 1) * (i + 1)) {
        throw DomainError(fmt::format("matrix cell (L={}, I={}) has value {}, expected {}", l + 1,
                                      i + 1, c.value, (l + 1) * (i + 1)));
      }
      if (i > 0 && c.band < cells_[l][i - 1].band) {
        throw DomainError(fmt::format("matrix band decreases along row L={} at I={}", l + 1, i + 1));
      }
      if (l > 0 && c.band < cells_[l - 1][i].band) {
        throw DomainError(
            fmt::format("matrix band decreases along column I={} at L={}", i + 1, l + 1));
      }
    }
  }
}

const RiskMatrix& RiskMatrix::standard() {
  static const RiskMatrix matrix(standard_cells());
  return matrix;
}

const RiskCell& RiskMatrix::cell(int likelihood, int impact) const {
  if (!in_scale(likelihood) || !in_scale(impact)) {
    throw DomainError(
        fmt::format("matrix index (L={}, I={}) outside 1..5", likelihood, impact));
  }
  return cells_[likelihood - 1][impact - 1];
}

void validate_config(const AssessmentConfig& config) {
  if (!in_multiplier_range(config.global_multiplier)) {
    throw DomainError(
        fmt::format("global multiplier {} outside (0, 2]", config.global_multiplier));
  }
  if (!(config.boundary_epsilon >= 0.0) || !std::isfinite(config.boundary_epsilon)) {
    throw DomainError(fmt::format("boundary_epsilon {} must be finite and >= 0",
                                  config.boundary_epsilon));
  }
}

double step_likelihood(int threat, int exposure, double multiplier) {
  if (!in_scale(threat)) throw DomainError(fmt::format("threat {} outside 1..5", threat));
  if (!in_scale(exposure)) throw DomainError(fmt::format("exposure {} outside 1..5", exposure));
  if (!in_multiplier_range(multiplier)) {
    throw DomainError(fmt::format("multiplier {} outside (0, 2]", multiplier));
  }
  const auto m = kernels::scale_multiplier(multiplier);
  return ((static_cast<double>(threat) * static_cast<double>(exposure)) * m.units) / m.scale;
}

double step_probability(double likelihood) {
  require_positive_finite(likelihood, "step likelihood");
  return std::min(1.0, likelihood / kProbabilityScale);
}

Aggregate aggregate(std::span<const double> likelihoods, AggregationMethod method) {
  if (likelihoods.empty()) throw DomainError("cannot aggregate an empty likelihood vector");
  for (double l : likelihoods) require_positive_finite(l, "step likelihood");

  const auto& k = kernels::active();
  if (method == AggregationMethod::Maximum) return {k.max_value(likelihoods), std::nullopt};

  // Reduce in sorted order so the rounded result does not depend on step order.
  std::vector<double> sorted(likelihoods.begin(), likelihoods.end());
  std::sort(sorted.begin(), sorted.end());
  switch (method) {
    case AggregationMethod::Maximum:
      break;
    case AggregationMethod::Average: {
      const double mean = k.sum(sorted) / static_cast<double>(sorted.size());
      // The rounded mean of equal values can land an ulp outside [min, max].
      return {std::clamp(mean, sorted.front(), sorted.back()), std::nullopt};
    }
    case AggregationMethod::GeometricMean: {
      std::vector<double> p(sorted.size());
      k.step_probabilities(sorted, p);
      // Log space keeps long chains from underflowing the product.
      double log_sum = 0.0;
      for (double pi : p) log_sum += std::log(pi);
      const double n = static_cast<double>(p.size());
      return {static_cast<double>(kScaleMax) * std::exp(log_sum / n), std::exp(log_sum)};
    }
  }
  throw DomainError("unknown aggregation method");
}

double adjust(double raw, const AssessmentConfig& config) {
  require_positive_finite(raw, "raw likelihood");
  return raw * config.global_multiplier;
}

LikelihoodBounds global_bounds(std::span<const double> multipliers, double global_multiplier) {
  if (multipliers.empty()) throw DomainError("cannot compute bounds over an empty portfolio");
  if (!in_multiplier_range(global_multiplier)) {
    throw DomainError(fmt::format("global multiplier {} outside (0, 2]", global_multiplier));
  }
  for (double m : multipliers) {
    if (!in_multiplier_range(m)) throw DomainError(fmt::format("multiplier {} outside (0, 2]", m));
  }
  const auto [lo, hi] = std::minmax_element(multipliers.begin(), multipliers.end());
  // Same decimal product as the steps, so every l_i stays inside the bounds.
  return {step_likelihood(kScaleMin, kScaleMin, *lo) * global_multiplier,
          step_likelihood(kScaleMax, kScaleMax, *hi) * global_multiplier};
}

LikelihoodBounds global_bounds(const Portfolio& portfolio, const AssessmentConfig& config) {
  std::vector<double> multipliers;
  for (const auto& [id, chain] : portfolio.chains) {
    for (const auto& step : chain.steps) multipliers.push_back(step.multiplier);
  }
  return global_bounds(multipliers, config.global_multiplier);
}

int discretize(double adjusted, const LikelihoodBounds& bounds, double epsilon) {
  if (!std::isfinite(bounds.lower) || !std::isfinite(bounds.upper) ||
      !(bounds.upper > bounds.lower)) {
    throw DomainError(
        fmt::format("invalid likelihood bounds [{}, {}]", bounds.lower, bounds.upper));
  }
  if (std::isnan(adjusted)) throw DomainError("adjusted likelihood is NaN");
  if (adjusted <= bounds.lower) return 1;
  if (adjusted >= bounds.upper) return kLevels;
  const double scaled =
      static_cast<double>(kLevels) * (adjusted - bounds.lower) / (bounds.upper - bounds.lower);
  const int level = 1 + static_cast<int>(std::floor(scaled + epsilon));
  return std::clamp(level, 1, kLevels);
}

RiskCell risk_lookup(int likelihood, int impact, const RiskMatrix& matrix) {
  return matrix.cell(likelihood, impact);
}

std::string_view to_string(AssessmentContext context) {
  switch (context) {
    case AssessmentContext::SafetyCritical: return "safety-critical";
    case AssessmentContext::RegulatoryCompliance: return "regulatory-compliance";
    case AssessmentContext::Balanced: return "balanced";
    case AssessmentContext::EarlyStage: return "early-stage";
  }
  return {};
}

std::optional<AssessmentContext> parse_context(std::string_view name) {
  for (auto c : {AssessmentContext::SafetyCritical, AssessmentContext::RegulatoryCompliance,
                 AssessmentContext::Balanced, AssessmentContext::EarlyStage}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

MethodRecommendation recommend_method(std::optional<AssessmentContext> context) {
  if (!context) {
    return {AggregationMethod::GeometricMean, std::nullopt,
            "Default: product of step success probabilities, rescaled to 0..5."};
  }
  switch (*context) {
    case AssessmentContext::SafetyCritical:
      return {AggregationMethod::Maximum, std::nullopt,
              "Upper bound: the most exposed step sets the rating."};
    case AssessmentContext::RegulatoryCompliance:
      return {AggregationMethod::Maximum, AggregationMethod::GeometricMean,
              "Conservative upper bound; geom gives a traceable probabilistic alternative."};
    case AssessmentContext::Balanced:
      return {AggregationMethod::GeometricMean, std::nullopt,
              "Series-system model: every step has to succeed."};
    case AssessmentContext::EarlyStage:
      return {AggregationMethod::Average, std::nullopt,
              "Cheap smoothed view over all steps."};
  }
  throw DomainError("unknown assessment context");
}

MethodRecommendation recommend_method(std::string_view context) {
  auto parsed = parse_context(context);
  if (!parsed) throw DomainError(fmt::format("unknown assessment context '{}'", context));
  return recommend_method(parsed);
}

}  // namespace qrisk
