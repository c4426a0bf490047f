#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "qrisk/assessment.hpp"
#include "qrisk/catalog.hpp"
#include "qrisk/chain.hpp"
#include "qrisk/findings.hpp"

namespace qrisk {

enum class OutputFormat { Table, Json, Csv };

std::string_view to_string(OutputFormat format);
std::optional<OutputFormat> parse_format(std::string_view name);

// Table output prints reals with three decimals; json keeps full precision;
// csv has one header row and one row per chain, strings quoted, "\n" endings.

std::string render_assessment(const AssessmentResult& result, const Portfolio& portfolio,
                              const Catalog& catalog, OutputFormat format);
std::string render_comparison(const Comparison& comparison, OutputFormat format);
std::string render_whatif(const WhatIfDiff& diff, OutputFormat format);
std::string render_findings(const ValidationReport& report);

std::string csv_quote(std::string_view field);

}  // namespace qrisk
