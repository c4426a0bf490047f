#include "qrisk/assessment.hpp"

#include <algorithm>
#include <cstdint>

#include <fmt/format.h>

#include "qrisk/errors.hpp"
#include "qrisk/kernels.hpp"

namespace qrisk {

namespace {

void require_valid(const ValidationReport& report) {
  if (!report.ok()) throw ValidationError(report.findings);
}

std::vector<double> chain_likelihoods(const KillChain& chain) {
  const auto n = chain.steps.size();
  std::vector<std::int32_t> threat(n);
  std::vector<std::int32_t> exposure(n);
  std::vector<double> units(n);
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    threat[i] = chain.steps[i].threat;
    exposure[i] = chain.steps[i].exposure;
    const auto m = kernels::scale_multiplier(chain.steps[i].multiplier);
    units[i] = m.units;
    scale[i] = m.scale;
  }
  std::vector<double> out(n);
  kernels::active().step_likelihoods(threat, exposure, units, scale, out);
  return out;
}

std::size_t first_max_index(const std::vector<double>& values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

void sort_scenarios(std::vector<ScenarioResult>& scenarios) {
  std::sort(scenarios.begin(), scenarios.end(), [](const auto& a, const auto& b) {
    if (a.risk_value != b.risk_value) return a.risk_value > b.risk_value;
    return a.chain_id < b.chain_id;
  });
}

void check_assessable(const Portfolio& portfolio, const Catalog& catalog,
                      const AssessmentConfig& config) {
  validate_config(config);
  if (portfolio.chains.empty()) throw DomainError("portfolio contains no kill chains");
  require_valid(validate_portfolio(portfolio, catalog));
}

}  // namespace

const ScenarioResult* AssessmentResult::find(std::string_view chain_id) const {
  for (const auto& s : scenarios) {
    if (s.chain_id == chain_id) return &s;
  }
  return nullptr;
}

ScenarioResult score_chain(const KillChain& chain, const AssessmentConfig& config,
                           const LikelihoodBounds& bounds, int acceptance_threshold) {
  require_valid(check_chain(chain));

  ScenarioResult result;
  result.chain_id = chain.id;
  result.step_likelihoods = chain_likelihoods(chain);
  const auto agg = aggregate(result.step_likelihoods, config.method);
  result.raw_likelihood = agg.raw;
  result.success_probability = agg.success_probability;
  result.adjusted_likelihood = adjust(agg.raw, config);
  result.discrete_likelihood = discretize(result.adjusted_likelihood, bounds, config.boundary_epsilon);
  result.impact = chain.impact.level;
  const auto cell = risk_lookup(result.discrete_likelihood, result.impact, config.matrix);
  result.risk_value = cell.value;
  result.risk_band = cell.band;
  result.weakest_step_index = first_max_index(result.step_likelihoods);
  result.treatment_required = result.risk_value >= acceptance_threshold;
  return result;
}

AssessmentResult assess_portfolio(const Portfolio& portfolio, const Catalog& catalog,
                                  const AssessmentConfig& config, std::string timestamp) {
  check_assessable(portfolio, catalog, config);

  AssessmentResult result;
  result.config = config;
  result.acceptance_threshold = portfolio.context.acceptance_threshold;
  result.bounds = global_bounds(portfolio, config);
  result.timestamp = std::move(timestamp);
  for (const auto& [id, chain] : portfolio.chains) {
    result.scenarios.push_back(score_chain(chain, config, result.bounds, result.acceptance_threshold));
  }
  sort_scenarios(result.scenarios);
  for (const auto& s : result.scenarios) {
    if (s.treatment_required) result.treatment_required.push_back(s.chain_id);
  }
  return result;
}

bool WhatIfOverride::empty() const {
  return !method && !global_multiplier && steps.empty() && impacts.empty();
}

void apply_overrides(const WhatIfOverride& overrides, Portfolio& portfolio,
                     AssessmentConfig& config) {
  if (overrides.method) config.method = *overrides.method;
  if (overrides.global_multiplier) {
    if (!in_multiplier_range(*overrides.global_multiplier)) {
      throw DomainError(fmt::format("global multiplier override {} outside (0, 2]",
                                    *overrides.global_multiplier));
    }
    config.global_multiplier = *overrides.global_multiplier;
  }

  auto find_chain = [&](const std::string& id) -> KillChain& {
    auto it = portfolio.chains.find(id);
    if (it == portfolio.chains.end()) {
      throw NotFoundError(fmt::format("override references unknown chain '{}'", id));
    }
    return it->second;
  };

  for (const auto& o : overrides.steps) {
    auto& chain = find_chain(o.chain_id);
    if (o.step_index >= chain.steps.size()) {
      throw NotFoundError(fmt::format("override references step {} of chain '{}' which has {} steps",
                                      o.step_index, o.chain_id, chain.steps.size()));
    }
    auto& step = chain.steps[o.step_index];
    if (o.threat) {
      if (!in_scale(*o.threat)) {
        throw DomainError(fmt::format("threat override {} outside 1..5", *o.threat));
      }
      step.threat = *o.threat;
    }
    if (o.exposure) {
      if (!in_scale(*o.exposure)) {
        throw DomainError(fmt::format("exposure override {} outside 1..5", *o.exposure));
      }
      step.exposure = *o.exposure;
    }
    if (o.multiplier) {
      if (!in_multiplier_range(*o.multiplier)) {
        throw DomainError(fmt::format("multiplier override {} outside (0, 2]", *o.multiplier));
      }
      step.multiplier = *o.multiplier;
    }
  }

  for (const auto& o : overrides.impacts) {
    auto& chain = find_chain(o.chain_id);
    if (!in_scale(o.impact)) {
      throw DomainError(fmt::format("impact override {} outside 1..5", o.impact));
    }
    chain.impact.level = o.impact;
  }
}

WhatIfDiff what_if(const Portfolio& portfolio, const Catalog& catalog,
                   const AssessmentConfig& config, const WhatIfOverride& overrides,
                   std::string timestamp) {
  Portfolio edited = portfolio;
  AssessmentConfig edited_config = config;
  apply_overrides(overrides, edited, edited_config);

  WhatIfDiff diff;
  diff.baseline = assess_portfolio(portfolio, catalog, config, timestamp);
  diff.modified = assess_portfolio(edited, catalog, edited_config, std::move(timestamp));
  diff.bounds_changed = diff.baseline.bounds != diff.modified.bounds;

  for (const auto& [id, chain] : portfolio.chains) {
    const auto* before = diff.baseline.find(id);
    const auto* after = diff.modified.find(id);
    diff.deltas.push_back({id, after->discrete_likelihood - before->discrete_likelihood,
                           after->risk_value - before->risk_value, before->risk_band,
                           after->risk_band});
  }
  return diff;
}

WeakestStep weakest_step(const KillChain& chain) {
  require_valid(check_chain(chain));
  const auto likelihoods = chain_likelihoods(chain);
  const auto index = first_max_index(likelihoods);
  return {index, likelihoods[index]};
}

Comparison compare_aggregations(const Portfolio& portfolio, const Catalog& catalog,
                                const AssessmentConfig& config) {
  check_assessable(portfolio, catalog, config);

  Comparison out;
  out.global_multiplier = config.global_multiplier;
  // Bounds depend only on multipliers, never on the aggregation method.
  out.bounds = global_bounds(portfolio, config);
  for (const auto& [id, chain] : portfolio.chains) {
    ComparisonRow row;
    row.chain_id = id;
    row.impact = chain.impact.level;
    for (std::size_t m = 0; m < kAllMethods.size(); ++m) {
      auto method_config = config;
      method_config.method = kAllMethods[m];
      const auto s = score_chain(chain, method_config, out.bounds, 0);
      row.outcomes[m] = {kAllMethods[m], s.raw_likelihood, s.discrete_likelihood, s.risk_value,
                         s.risk_band};
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace qrisk
