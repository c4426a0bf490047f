#include "qrisk/chain.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "qrisk/errors.hpp"

namespace qrisk {

namespace {

constexpr std::array<std::string_view, 4> kPhaseNames{"knowing", "entering", "finding",
                                                      "exploiting"};

// Two or more levels apart from the catalog default is worth a second look.
constexpr int kDeviationWarningLevels = 2;

}  // namespace

std::string_view to_string(KillChainPhase phase) {
  return kPhaseNames[static_cast<std::size_t>(phase)];
}

std::optional<KillChainPhase> parse_phase(std::string_view name) {
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (kPhaseNames[i] == name) return static_cast<KillChainPhase>(i);
  }
  return std::nullopt;
}

ValidationReport check_chain(const KillChain& chain) {
  ValidationReport report;
  if (chain.id.empty()) report.error("id", "chain id must not be empty");
  if (chain.steps.empty()) report.error("steps", "kill chain must contain at least one step");
  if (!in_scale(chain.impact.level)) {
    report.error("impact.level", fmt::format("impact {} outside 1..5", chain.impact.level));
  }

  auto highest = KillChainPhase::Knowing;
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const auto& step = chain.steps[i];
    const auto path = fmt::format("steps[{}]", i);
    if (step.technique_id.empty()) {
      report.error(path + ".technique_id", "technique_id must not be empty");
    }
    if (step.phase < highest) {
      report.error(path + ".phase",
                   fmt::format("phase '{}' at step {} follows '{}'; phases must not go backwards",
                               to_string(step.phase), i, to_string(highest)));
    } else {
      highest = step.phase;
    }
    if (!in_scale(step.threat)) {
      report.error(path + ".threat", fmt::format("threat {} outside 1..5", step.threat));
    }
    if (!in_scale(step.exposure)) {
      report.error(path + ".exposure", fmt::format("exposure {} outside 1..5", step.exposure));
    }
    if (!in_multiplier_range(step.multiplier)) {
      report.error(path + ".multiplier",
                   fmt::format("multiplier {} outside (0, 2]", step.multiplier));
    }
  }
  return report;
}

KillChain build_chain(std::string id, std::string name, std::vector<ChainStep> steps,
                      Impact impact, std::string description) {
  KillChain chain{std::move(id), std::move(name), std::move(description), std::move(steps),
                  std::move(impact)};
  auto report = check_chain(chain);
  if (!report.ok()) throw ValidationError(std::move(report.findings));
  return chain;
}

ValidationReport validate_chain(const KillChain& chain, const Catalog& catalog) {
  auto report = check_chain(chain);
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const auto& step = chain.steps[i];
    const auto path = fmt::format("steps[{}]", i);
    const auto* technique = catalog.find(step.technique_id);
    if (technique == nullptr) {
      if (!step.technique_id.empty()) {
        report.error(path + ".technique_id",
                     fmt::format("technique '{}' not found in catalog", step.technique_id));
      }
      continue;
    }
    if (std::abs(step.threat - technique->default_threat) >= kDeviationWarningLevels) {
      report.warning(path + ".threat",
                     fmt::format("threat {} deviates from catalog default {} for '{}'",
                                 step.threat, technique->default_threat, technique->id));
    }
    if (std::abs(step.exposure - technique->default_exposure) >= kDeviationWarningLevels) {
      report.warning(path + ".exposure",
                     fmt::format("exposure {} deviates from catalog default {} for '{}'",
                                 step.exposure, technique->default_exposure, technique->id));
    }
  }
  return report;
}

ValidationReport validate_portfolio(const Portfolio& portfolio, const Catalog& catalog) {
  ValidationReport report;
  const int threshold = portfolio.context.acceptance_threshold;
  if (threshold < 1 || threshold > 25) {
    report.error("context.acceptance_threshold",
                 fmt::format("acceptance_threshold {} outside 1..25", threshold));
  }
  if (!portfolio.catalog_version.empty() && portfolio.catalog_version != catalog.version) {
    report.warning("catalog_version",
                   fmt::format("portfolio references catalog version '{}' but '{}' is loaded",
                               portfolio.catalog_version, catalog.version));
  }
  for (const auto& [key, chain] : portfolio.chains) {
    const auto path = fmt::format("chains.{}", key);
    if (chain.id != key) {
      report.error(path + ".id", fmt::format("chain id '{}' does not match its key", chain.id));
    }
    report.merge(validate_chain(chain, catalog), path);
  }
  return report;
}

}  // namespace qrisk
