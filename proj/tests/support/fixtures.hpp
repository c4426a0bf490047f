#pragma once

#include <array>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "qrisk/assessment.hpp"
#include "qrisk/catalog.hpp"
#include "qrisk/chain.hpp"

namespace qrisk::testing {

std::filesystem::path data_path(const std::string& name);
std::filesystem::path golden_path(const std::string& name);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// The shipped PNS fixture.
const Catalog& pns_catalog();
const Portfolio& pns_portfolio();
const KillChain& pns_chain();
inline constexpr const char* kPnsChainId = "pns-qkd-link";

// Published per-step contributions of the worked example.
inline constexpr std::array<double, 9> kPnsLikelihoods{2.0, 4.0, 9.0, 4.0, 7.2,
                                                        6.4, 24.0, 6.0, 6.0};
inline constexpr std::size_t kPnsStepIndex = 6;

/// One CLI invocation on the PNS fixture whose stdout is stored under
/// tests/golden/<file>.
struct GoldenCase {
  std::string file;
  std::vector<std::string> args;
  int exit_code;
};

// Keeps gtest from printing the struct's bytes into test names.
inline void PrintTo(const GoldenCase& c, std::ostream* os) { *os << c.file; }

/// assess (all methods), compare and whatif in json, csv and table form.
std::vector<GoldenCase> golden_cases();

AssessmentConfig config_for(AggregationMethod method, double global_multiplier = 1.0);

}  // namespace qrisk::testing
