#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrisk/catalog.hpp"
#include "qrisk/findings.hpp"

namespace qrisk {

inline constexpr int kScaleMin = 1;
inline constexpr int kScaleMax = 5;        // n_max
inline constexpr double kMultiplierMax = 2.0;  // n_m

inline constexpr bool in_scale(int value) { return value >= kScaleMin && value <= kScaleMax; }
// Rejects NaN as well as values outside (0, 2].
inline constexpr bool in_multiplier_range(double m) { return m > 0.0 && m <= kMultiplierMax; }

/// Kill-chain phases in canonical order.
enum class KillChainPhase { Knowing = 0, Entering = 1, Finding = 2, Exploiting = 3 };

std::string_view to_string(KillChainPhase phase);
std::optional<KillChainPhase> parse_phase(std::string_view name);

struct ChainStep {
  std::string technique_id;
  KillChainPhase phase = KillChainPhase::Knowing;
  int threat = 1;
  int exposure = 1;
  double multiplier = 1.0;
  std::optional<std::string> note;

  bool operator==(const ChainStep&) const = default;
};

struct Impact {
  int level = 1;
  std::string rationale;

  bool operator==(const Impact&) const = default;
};

struct KillChain {
  std::string id;
  std::string name;
  std::string description;
  std::vector<ChainStep> steps;
  Impact impact;

  bool operator==(const KillChain&) const = default;
};

struct RoleAssignment {
  std::string role;
  std::string responsibility;

  bool operator==(const RoleAssignment&) const = default;
};

struct ContextProfile {
  std::string scope;
  int acceptance_threshold = 8;  // R >= threshold requires treatment
  std::vector<RoleAssignment> roles;

  bool operator==(const ContextProfile&) const = default;
};

struct Portfolio {
  ContextProfile context;
  std::string catalog_version;
  std::map<std::string, KillChain> chains;

  bool operator==(const Portfolio&) const = default;
};

/// Catalog-independent invariants of a chain: non-empty, scores in range,
/// phases non-decreasing.
ValidationReport check_chain(const KillChain& chain);

/// Builds a chain, throwing ValidationError when any invariant fails. The
/// first finding names the first offending step.
KillChain build_chain(std::string id, std::string name, std::vector<ChainStep> steps,
                      Impact impact, std::string description = {});

/// check_chain plus technique resolution against `catalog`, and a warning when
/// a step's T or E sits two or more levels from the technique's default.
ValidationReport validate_chain(const KillChain& chain, const Catalog& catalog);

ValidationReport validate_portfolio(const Portfolio& portfolio, const Catalog& catalog);

KillChain load_chain(std::string_view document, const LoadOptions& options = {});
std::string serialize_chain(const KillChain& chain);

Portfolio load_portfolio(std::string_view document, const LoadOptions& options = {});
std::string serialize_portfolio(const Portfolio& portfolio);

}  // namespace qrisk
