#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qrisk/chain.hpp"

namespace qrisk {

enum class AggregationMethod { Maximum, Average, GeometricMean };

inline constexpr std::array<AggregationMethod, 3> kAllMethods{
    AggregationMethod::Maximum, AggregationMethod::Average, AggregationMethod::GeometricMean};

// "max" | "avg" | "geom"
std::string_view to_string(AggregationMethod method);
std::optional<AggregationMethod> parse_method(std::string_view name);

enum class RiskBand { Low, Medium, High };

std::string_view to_string(RiskBand band);
std::optional<RiskBand> parse_band(std::string_view name);

/// Qualitative labels: "Very unlikely" .. "Frequent".
std::string_view likelihood_label(int likelihood);
/// Qualitative labels: "Very low" .. "Very high".
std::string_view impact_label(int impact);

struct RiskCell {
  int value = 0;
  RiskBand band = RiskBand::Low;

  bool operator==(const RiskCell&) const = default;
};

/// Explicit 5x5 (likelihood, impact) table. Bands are stored per cell rather
/// than derived from thresholds: value 4 is Low at (2,2) but Medium at (1,4).
class RiskMatrix {
 public:
  using Cells = std::array<std::array<RiskCell, 5>, 5>;  // [L-1][I-1]

  /// Throws DomainError unless value(L,I) == L*I everywhere and bands are
  /// non-decreasing along every row and column.
  explicit RiskMatrix(const Cells& cells);

  /// ISO/IEC 27005-style table, with (L=2, I=5) = 10/Medium.
  static const RiskMatrix& standard();

  const RiskCell& cell(int likelihood, int impact) const;
  const Cells& cells() const { return cells_; }

  bool operator==(const RiskMatrix&) const = default;

 private:
  Cells cells_;
};

struct AssessmentConfig {
  static constexpr int n_max = kScaleMax;

  AggregationMethod method = AggregationMethod::GeometricMean;
  double global_multiplier = 1.0;  // M in (0, 2]
  RiskMatrix matrix = RiskMatrix::standard();
  double boundary_epsilon = 1e-9;

  bool operator==(const AssessmentConfig&) const = default;
};

/// Throws DomainError on M outside (0, 2] or a negative/non-finite epsilon.
void validate_config(const AssessmentConfig& config);

struct LikelihoodBounds {
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const LikelihoodBounds&) const = default;
};

struct Aggregate {
  double raw = 0.0;
  std::optional<double> success_probability;  // GeometricMean only
};

/// (threat * exposure) * multiplier.
double step_likelihood(int threat, int exposure, double multiplier);

/// min(1, likelihood / n_max^2).
double step_probability(double likelihood);

/// Collapses step likelihoods into L_raw. GeometricMean works in log space:
/// 5 * exp(sum(log p_i) / N), and reports P_succ = exp(sum(log p_i)).
Aggregate aggregate(std::span<const double> likelihoods, AggregationMethod method);

/// L_adj = L_raw * M.
double adjust(double raw, const AssessmentConfig& config);

/// L_min = min(m) * M, L_max = 25 * max(m) * M over every step of every chain.
LikelihoodBounds global_bounds(const Portfolio& portfolio, const AssessmentConfig& config);
LikelihoodBounds global_bounds(std::span<const double> multipliers, double global_multiplier);

/// 1 + floor(5 (L_adj - L_min) / (L_max - L_min) + epsilon), clamped to 1..5.
int discretize(double adjusted, const LikelihoodBounds& bounds, double epsilon = 1e-9);

RiskCell risk_lookup(int likelihood, int impact, const RiskMatrix& matrix = RiskMatrix::standard());

enum class AssessmentContext { SafetyCritical, RegulatoryCompliance, Balanced, EarlyStage };

std::string_view to_string(AssessmentContext context);
std::optional<AssessmentContext> parse_context(std::string_view name);

struct MethodRecommendation {
  AggregationMethod method;
  std::optional<AggregationMethod> alternative;
  std::string rationale;
};

/// Unspecified context falls back to GeometricMean.
MethodRecommendation recommend_method(std::optional<AssessmentContext> context = std::nullopt);
/// Throws DomainError on an unknown context name.
MethodRecommendation recommend_method(std::string_view context);

}  // namespace qrisk
