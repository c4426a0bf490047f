#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrisk::testing {

std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(QRISK_DATA_DIR) / name;
}

std::filesystem::path golden_path(const std::string& name) {
  return std::filesystem::path(QRISK_GOLDEN_DIR) / name;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

const Catalog& pns_catalog() {
  static const Catalog catalog = load_catalog(read_text(data_path("pns_catalog.json")));
  return catalog;
}

const Portfolio& pns_portfolio() {
  static const Portfolio portfolio = load_portfolio(read_text(data_path("pns_portfolio.json")));
  return portfolio;
}

const KillChain& pns_chain() { return pns_portfolio().chains.at(kPnsChainId); }

std::vector<GoldenCase> golden_cases() {
  const auto catalog = data_path("pns_catalog.json").string();
  const auto portfolio = data_path("pns_portfolio.json").string();
  const auto overrides = data_path("pns_overrides.json").string();
  constexpr int kOk = 0;
  constexpr int kFlagged = 3;

  std::vector<GoldenCase> out;
  for (const std::string format : {"json", "csv"}) {
    for (const std::string method : {"max", "avg", "geom"}) {
      out.push_back({"assess_" + method + "." + format,
                     {"assess", catalog, portfolio, "--method", method, "--global-multiplier", "1.0",
                      "--threshold", "8", "--format", format},
                     method == "max" ? kFlagged : kOk});
    }
    out.push_back({"compare." + format, {"compare", catalog, portfolio, "--format", format}, kOk});
    out.push_back({"whatif_max." + format,
                   {"whatif", catalog, portfolio, overrides, "--method", "max", "--format", format},
                   kOk});
  }
  out.push_back({"assess_max.txt", {"assess", catalog, portfolio, "--method", "max"}, kFlagged});
  out.push_back({"compare.txt", {"compare", catalog, portfolio}, kOk});
  out.push_back({"whatif_max.txt", {"whatif", catalog, portfolio, overrides, "--method", "max"}, kOk});
  return out;
}

AssessmentConfig config_for(AggregationMethod method, double global_multiplier) {
  AssessmentConfig config;
  config.method = method;
  config.global_multiplier = global_multiplier;
  return config;
}

}  // namespace qrisk::testing
