#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qrisk/catalog.hpp"
#include "qrisk/chain.hpp"
#include "qrisk/scoring.hpp"

namespace qrisk {

struct ScenarioResult {
  std::string chain_id;
  std::vector<double> step_likelihoods;
  double raw_likelihood = 0.0;
  double adjusted_likelihood = 0.0;
  int discrete_likelihood = 1;
  int impact = 1;
  int risk_value = 1;
  RiskBand risk_band = RiskBand::Low;
  std::size_t weakest_step_index = 0;
  std::optional<double> success_probability;
  bool treatment_required = false;

  bool operator==(const ScenarioResult&) const = default;
};

struct AssessmentResult {
  AssessmentConfig config;
  int acceptance_threshold = 8;
  LikelihoodBounds bounds;
  // Descending risk_value, then ascending chain id.
  std::vector<ScenarioResult> scenarios;
  // Chains with risk_value >= acceptance_threshold, in scenario order.
  std::vector<std::string> treatment_required;
  std::string timestamp;  // caller-supplied; empty means "not stamped"

  const ScenarioResult* find(std::string_view chain_id) const;

  bool operator==(const AssessmentResult&) const = default;
};

/// Scores one chain against precomputed portfolio-wide bounds.
ScenarioResult score_chain(const KillChain& chain, const AssessmentConfig& config,
                           const LikelihoodBounds& bounds, int acceptance_threshold);

/// Validates the portfolio against the catalog (ValidationError on failure),
/// computes bounds once, then scores every chain. Throws DomainError on an
/// empty portfolio or a bad config.
AssessmentResult assess_portfolio(const Portfolio& portfolio, const Catalog& catalog,
                                  const AssessmentConfig& config, std::string timestamp = {});

struct StepOverride {
  std::string chain_id;
  std::size_t step_index = 0;
  std::optional<int> threat;
  std::optional<int> exposure;
  std::optional<double> multiplier;

  bool operator==(const StepOverride&) const = default;
};

struct ImpactOverride {
  std::string chain_id;
  int impact = 1;

  bool operator==(const ImpactOverride&) const = default;
};

struct WhatIfOverride {
  std::optional<AggregationMethod> method;
  std::optional<double> global_multiplier;
  std::vector<StepOverride> steps;
  std::vector<ImpactOverride> impacts;

  bool empty() const;
  bool operator==(const WhatIfOverride&) const = default;
};

/// Applies overrides to copies. Throws NotFoundError for unknown chains or
/// step indices and DomainError for out-of-range values.
void apply_overrides(const WhatIfOverride& overrides, Portfolio& portfolio,
                     AssessmentConfig& config);

struct ChainDelta {
  std::string chain_id;
  int delta_likelihood = 0;
  int delta_risk = 0;
  RiskBand baseline_band = RiskBand::Low;
  RiskBand modified_band = RiskBand::Low;

  bool band_changed() const { return baseline_band != modified_band; }
  bool changed() const { return delta_likelihood != 0 || delta_risk != 0 || band_changed(); }
  bool operator==(const ChainDelta&) const = default;
};

struct WhatIfDiff {
  AssessmentResult baseline;
  AssessmentResult modified;
  std::vector<ChainDelta> deltas;  // ordered by chain id
  bool bounds_changed = false;
};

/// Recomputes the whole portfolio, bounds included, under the overrides.
/// Inputs are never modified.
WhatIfDiff what_if(const Portfolio& portfolio, const Catalog& catalog,
                   const AssessmentConfig& config, const WhatIfOverride& overrides,
                   std::string timestamp = {});

struct WeakestStep {
  std::size_t step_index = 0;
  double likelihood = 0.0;
};

/// First step attaining the maximal likelihood. Throws DomainError on an
/// unscoreable chain.
WeakestStep weakest_step(const KillChain& chain);

struct MethodOutcome {
  AggregationMethod method = AggregationMethod::Maximum;
  double raw_likelihood = 0.0;
  int likelihood = 1;
  int risk_value = 1;
  RiskBand band = RiskBand::Low;

  bool operator==(const MethodOutcome&) const = default;
};

struct ComparisonRow {
  std::string chain_id;
  int impact = 1;
  std::array<MethodOutcome, 3> outcomes;  // indexed like kAllMethods

  bool operator==(const ComparisonRow&) const = default;
};

struct Comparison {
  LikelihoodBounds bounds;
  double global_multiplier = 1.0;
  std::vector<ComparisonRow> rows;  // ordered by chain id
};

/// All three aggregations over one shared bounds computation. config.method
/// is ignored.
Comparison compare_aggregations(const Portfolio& portfolio, const Catalog& catalog,
                                const AssessmentConfig& config);

}  // namespace qrisk
