#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>

namespace qrisk {

// Leaves of the objective hierarchy: destruction splits into physical and
// logical, extraction into full and partial.
enum class AttackObjective {
  PhysicalDestruction,
  LogicalDestruction,
  DenialOfService,
  FullKeyOrDataExtraction,
  PartialKeyOrDataExtraction,
  ReducingSecurity,
};

enum class AttackMechanism { QuantumDominant, ClassicalDominant, CrossLayerHybrid };

enum class DeploymentEnvironment { FibreBased, FreeSpace, Both };

enum class LifecyclePhase { SupplyChain, Deployment, Operational, Decommissioning };

enum class SystemLayer { Physical, Protocol, Application };

/// Ordinal 1 (opportunist with basic tools) .. 5 (nation-state R&D), on the
/// same scale as the Threat score.
struct AdversaryCapability {
  int tier = 1;

  bool valid() const { return tier >= 1 && tier <= 5; }
  auto operator<=>(const AdversaryCapability&) const = default;
};

/// Wire names (lower-kebab-case) for each taxonomy enum.
template <class E>
struct EnumNames;

template <>
struct EnumNames<AttackObjective> {
  static constexpr std::string_view kind = "objective";
  static constexpr std::array<std::pair<AttackObjective, std::string_view>, 6> values{{
      {AttackObjective::PhysicalDestruction, "physical-destruction"},
      {AttackObjective::LogicalDestruction, "logical-destruction"},
      {AttackObjective::DenialOfService, "denial-of-service"},
      {AttackObjective::FullKeyOrDataExtraction, "full-key-or-data-extraction"},
      {AttackObjective::PartialKeyOrDataExtraction, "partial-key-or-data-extraction"},
      {AttackObjective::ReducingSecurity, "reducing-security"},
  }};
};

template <>
struct EnumNames<AttackMechanism> {
  static constexpr std::string_view kind = "mechanism";
  static constexpr std::array<std::pair<AttackMechanism, std::string_view>, 3> values{{
      {AttackMechanism::QuantumDominant, "quantum-dominant"},
      {AttackMechanism::ClassicalDominant, "classical-dominant"},
      {AttackMechanism::CrossLayerHybrid, "cross-layer-hybrid"},
  }};
};

template <>
struct EnumNames<DeploymentEnvironment> {
  static constexpr std::string_view kind = "environment";
  static constexpr std::array<std::pair<DeploymentEnvironment, std::string_view>, 3> values{{
      {DeploymentEnvironment::FibreBased, "fibre-based"},
      {DeploymentEnvironment::FreeSpace, "free-space"},
      {DeploymentEnvironment::Both, "both"},
  }};
};

template <>
struct EnumNames<LifecyclePhase> {
  static constexpr std::string_view kind = "lifecycle";
  static constexpr std::array<std::pair<LifecyclePhase, std::string_view>, 4> values{{
      {LifecyclePhase::SupplyChain, "supply-chain"},
      {LifecyclePhase::Deployment, "deployment"},
      {LifecyclePhase::Operational, "operational"},
      {LifecyclePhase::Decommissioning, "decommissioning"},
  }};
};

template <>
struct EnumNames<SystemLayer> {
  static constexpr std::string_view kind = "layer";
  static constexpr std::array<std::pair<SystemLayer, std::string_view>, 3> values{{
      {SystemLayer::Physical, "physical"},
      {SystemLayer::Protocol, "protocol"},
      {SystemLayer::Application, "application"},
  }};
};

template <class E>
constexpr std::string_view enum_name(E value) {
  for (const auto& [v, name] : EnumNames<E>::values) {
    if (v == value) return name;
  }
  return {};
}

template <class E>
constexpr std::optional<E> parse_enum(std::string_view name) {
  for (const auto& [v, n] : EnumNames<E>::values) {
    if (n == name) return v;
  }
  return std::nullopt;
}

}  // namespace qrisk
