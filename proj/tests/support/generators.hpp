#pragma once

// Random inputs for property checks. Everything is driven by an explicit
// std::mt19937_64 so a failing case reproduces from its seed.

#include <cstdint>
#include <random>
#include <vector>

#include "qrisk/assessment.hpp"
#include "qrisk/catalog.hpp"
#include "qrisk/chain.hpp"

namespace qrisk::testing {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi);
double uniform_real(Rng& rng, double lo, double hi);
bool coin(Rng& rng, double p = 0.5);

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(items.size()) - 1))];
}

template <class E>
E random_enum(Rng& rng) {
  const auto& values = EnumNames<E>::values;
  return values[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(values.size()) - 1))]
      .first;
}

/// A multiplier in (0, 2]: half the time a two-decimal value, otherwise an
/// arbitrary double.
double random_multiplier(Rng& rng);

/// Likelihoods drawn the way steps produce them: T * E * m.
std::vector<double> random_likelihoods(Rng& rng, int min_size = 1, int max_size = 16);

Catalog random_catalog(Rng& rng, int max_techniques = 12);

/// A chain whose techniques come from `catalog` (which must be non-empty)
/// with non-decreasing phases.
KillChain random_chain(Rng& rng, const Catalog& catalog, std::string id, int max_steps = 10);

/// 1..max_chains chains validating against `catalog`.
Portfolio random_portfolio(Rng& rng, const Catalog& catalog, int max_chains = 4);

/// Overrides referencing existing chains and steps with in-domain values.
WhatIfOverride random_overrides(Rng& rng, const Portfolio& portfolio);

TechniqueFilter random_filter(Rng& rng, const Catalog& catalog);

AssessmentConfig random_config(Rng& rng);

}  // namespace qrisk::testing
