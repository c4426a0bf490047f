#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qrisk/findings.hpp"
#include "qrisk/taxonomy.hpp"

namespace qrisk {

struct TacticDefinition {
  std::string id;
  std::string name;
  std::string description;

  bool operator==(const TacticDefinition&) const = default;
};

struct Technique {
  std::string id;
  std::string name;
  std::string description;
  std::vector<std::string> tactics;  // a technique may span several tactics
  AttackObjective objective = AttackObjective::FullKeyOrDataExtraction;
  AttackMechanism mechanism = AttackMechanism::QuantumDominant;
  DeploymentEnvironment environment = DeploymentEnvironment::FibreBased;
  AdversaryCapability capability;
  LifecyclePhase lifecycle = LifecyclePhase::Operational;
  SystemLayer layer = SystemLayer::Physical;
  // Seeds for chain building; chains may override per step.
  int default_threat = 1;
  int default_exposure = 1;
  std::vector<std::string> indicators;
  std::vector<std::string> countermeasures;

  bool operator==(const Technique&) const = default;
};

/// Knowledge base of techniques. Treated as immutable once loaded; a new
/// version replaces the old one wholesale.
struct Catalog {
  std::string version;
  std::map<std::string, TacticDefinition> tactics;
  std::map<std::string, Technique> techniques;

  const Technique* find(std::string_view id) const;

  bool operator==(const Catalog&) const = default;
};

/// The tactic vocabulary shipped with the default catalog.
const std::vector<TacticDefinition>& default_tactics();

/// Conjunctive filter; unset members match everything.
struct TechniqueFilter {
  std::optional<AttackObjective> objective;
  std::optional<AttackMechanism> mechanism;
  std::optional<DeploymentEnvironment> environment;
  std::optional<AdversaryCapability> capability;
  std::optional<LifecyclePhase> lifecycle;
  std::optional<SystemLayer> layer;
  std::set<std::string> tactics;  // technique must carry every listed tactic

  bool empty() const;
};

bool matches(const Technique& technique, const TechniqueFilter& filter);

/// Techniques matching every predicate of `filter`, ordered by id.
/// Throws DomainError when the filter names a tactic the catalog does not define.
std::vector<Technique> query_techniques(const Catalog& catalog, const TechniqueFilter& filter);

ValidationReport validate_catalog(const Catalog& catalog);

struct LoadOptions {
  // Accept (and ignore) unknown object keys instead of rejecting them.
  bool lenient = false;
};

/// Parses a catalog JSON document. All-or-nothing: throws ParseError on
/// malformed JSON and ValidationError (carrying every finding) otherwise.
Catalog load_catalog(std::string_view document, const LoadOptions& options = {});
std::string serialize_catalog(const Catalog& catalog);

}  // namespace qrisk
