#pragma once

// JSON mapping for every document the engine reads or writes. Key order in
// emitted objects is fixed so serialized output is byte-stable.

#include <string>
#include <string_view>

#include <json.hpp>

#include "qrisk/assessment.hpp"
#include "qrisk/catalog.hpp"
#include "qrisk/chain.hpp"
#include "qrisk/findings.hpp"
#include "qrisk/scoring.hpp"

namespace qrisk::json {

using Json = nlohmann::ordered_json;

/// Throws ParseError on malformed input.
Json parse_document(std::string_view text);

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const Json& value);

Json to_json(const Catalog& catalog);
Catalog catalog_from_json(const Json& document, const LoadOptions& options = {});

Json to_json(const KillChain& chain);
KillChain chain_from_json(const Json& document, const LoadOptions& options = {});

Json to_json(const Portfolio& portfolio);
Portfolio portfolio_from_json(const Json& document, const LoadOptions& options = {});

Json to_json(const WhatIfOverride& overrides);
WhatIfOverride overrides_from_json(const Json& document, const LoadOptions& options = {});

Json to_json(const AssessmentConfig& config);
Json to_json(const ScenarioResult& scenario);
Json to_json(const AssessmentResult& result);
/// Inverse of to_json(AssessmentResult); the matrix is assumed standard.
AssessmentResult assessment_from_json(const Json& document);

Json to_json(const WhatIfDiff& diff);
Json to_json(const Comparison& comparison);
Json to_json(const RiskMatrix& matrix);

Json to_json(const Finding& finding);
Json to_json(const ValidationReport& report);

}  // namespace qrisk::json
