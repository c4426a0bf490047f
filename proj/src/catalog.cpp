#include "qrisk/catalog.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "qrisk/errors.hpp"

namespace qrisk {

const Technique* Catalog::find(std::string_view id) const {
  auto it = techniques.find(std::string(id));
  return it == techniques.end() ? nullptr : &it->second;
}

const std::vector<TacticDefinition>& default_tactics() {
  static const std::vector<TacticDefinition> tactics{
      {"reconnaissance", "Reconnaissance", "Gathering information about the target system."},
      {"resource-development", "Resource Development",
       "Building or acquiring capabilities needed for later steps."},
      {"initial-access", "Initial Access", "Gaining a foothold on a system component or channel."},
      {"execution", "Execution", "Running adversary-controlled operations against the target."},
      {"collection", "Collection", "Gathering key material or data of interest."},
      {"exfiltration", "Exfiltration", "Removing collected information from the target."},
      {"impact", "Impact", "Manipulating, disrupting or abusing the system or its outputs."},
  };
  return tactics;
}

bool TechniqueFilter::empty() const {
  return !objective && !mechanism && !environment && !capability && !lifecycle && !layer &&
         tactics.empty();
}

bool matches(const Technique& t, const TechniqueFilter& f) {
  if (f.objective && t.objective != *f.objective) return false;
  if (f.mechanism && t.mechanism != *f.mechanism) return false;
  if (f.environment && t.environment != *f.environment) return false;
  if (f.capability && t.capability != *f.capability) return false;
  if (f.lifecycle && t.lifecycle != *f.lifecycle) return false;
  if (f.layer && t.layer != *f.layer) return false;
  for (const auto& tactic : f.tactics) {
    if (std::find(t.tactics.begin(), t.tactics.end(), tactic) == t.tactics.end()) return false;
  }
  return true;
}

std::vector<Technique> query_techniques(const Catalog& catalog, const TechniqueFilter& filter) {
  for (const auto& tactic : filter.tactics) {
    if (!catalog.tactics.contains(tactic)) {
      throw DomainError(fmt::format("unknown tactic '{}' in filter", tactic));
    }
  }
  std::vector<Technique> out;
  // std::map iteration is already id-ordered.
  for (const auto& [id, technique] : catalog.techniques) {
    if (matches(technique, filter)) out.push_back(technique);
  }
  return out;
}

ValidationReport validate_catalog(const Catalog& catalog) {
  ValidationReport report;
  for (const auto& [key, tactic] : catalog.tactics) {
    const auto path = fmt::format("tactics.{}", key);
    if (tactic.id.empty()) report.error(path + ".id", "tactic id must not be empty");
    if (tactic.id != key) {
      report.error(path + ".id", fmt::format("tactic id '{}' does not match its key", tactic.id));
    }
  }
  for (const auto& [key, t] : catalog.techniques) {
    const auto path = fmt::format("techniques.{}", key);
    if (t.id.empty()) report.error(path + ".id", "technique id must not be empty");
    if (t.id != key) {
      report.error(path + ".id", fmt::format("technique id '{}' does not match its key", t.id));
    }
    if (t.tactics.empty()) report.error(path + ".tactics", "technique must list at least one tactic");
    for (std::size_t i = 0; i < t.tactics.size(); ++i) {
      if (!catalog.tactics.contains(t.tactics[i])) {
        report.error(fmt::format("{}.tactics[{}]", path, i),
                     fmt::format("unknown tactic '{}'", t.tactics[i]));
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (t.tactics[j] == t.tactics[i]) {
          report.error(fmt::format("{}.tactics[{}]", path, i),
                       fmt::format("tactic '{}' listed twice", t.tactics[i]));
          break;
        }
      }
    }
    if (!t.capability.valid()) {
      report.error(path + ".capability",
                   fmt::format("capability tier {} outside 1..5", t.capability.tier));
    }
    if (t.default_threat < 1 || t.default_threat > 5) {
      report.error(path + ".default_threat",
                   fmt::format("default_threat {} outside 1..5", t.default_threat));
    }
    if (t.default_exposure < 1 || t.default_exposure > 5) {
      report.error(path + ".default_exposure",
                   fmt::format("default_exposure {} outside 1..5", t.default_exposure));
    }
  }
  return report;
}

}  // namespace qrisk
