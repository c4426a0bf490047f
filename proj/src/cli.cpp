#include "qrisk/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qrisk/assessment.hpp"
#include "qrisk/errors.hpp"
#include "qrisk/json_io.hpp"
#include "qrisk/report.hpp"

namespace qrisk::cli {

namespace {

// Carries an exit code out of a command body together with its message.
struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsageOrIo, fmt::format("cannot read '{}'", path)};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Failure{kUsageOrIo, fmt::format("error while reading '{}'", path)};
  return buffer.str();
}

struct CommonOptions {
  std::string catalog_path;
  std::string portfolio_path;
  std::string overrides_path;
  std::string method = "geom";
  double global_multiplier = 1.0;
  std::optional<int> threshold;
  std::string format = "table";
  bool lenient = false;
};

struct Inputs {
  Catalog catalog;
  Portfolio portfolio;
};

template <class T, class Loader>
T load_document(const std::string& path, std::string_view what, Loader&& loader,
                std::ostream& err) {
  const auto text = read_file(path);
  try {
    return loader(text);
  } catch (const ParseError& e) {
    throw Failure{kUsageOrIo, fmt::format("{} '{}': {}", what, path, e.what())};
  } catch (const ValidationError& e) {
    ValidationReport report{e.findings()};
    err << fmt::format("{} '{}' is invalid:\n", what, path) << render_findings(report);
    throw Failure{kValidationFailure, {}};
  }
}

Inputs load_inputs(const CommonOptions& opts, std::ostream& err) {
  const LoadOptions load{opts.lenient};
  Inputs in;
  in.catalog = load_document<Catalog>(
      opts.catalog_path, "catalog", [&](const std::string& t) { return load_catalog(t, load); },
      err);
  in.portfolio = load_document<Portfolio>(
      opts.portfolio_path, "portfolio",
      [&](const std::string& t) { return load_portfolio(t, load); }, err);
  if (opts.threshold) in.portfolio.context.acceptance_threshold = *opts.threshold;

  const auto report = validate_portfolio(in.portfolio, in.catalog);
  if (!report.ok()) {
    err << "portfolio does not validate against the catalog:\n" << render_findings(report);
    throw Failure{kValidationFailure, {}};
  }
  return in;
}

AssessmentConfig make_config(const CommonOptions& opts) {
  AssessmentConfig config;
  auto method = parse_method(opts.method);
  if (!method) {
    throw Failure{kUsageOrIo, fmt::format("--method must be one of max, avg, geom (got '{}')",
                                          opts.method)};
  }
  config.method = *method;
  if (!in_multiplier_range(opts.global_multiplier)) {
    throw Failure{kUsageOrIo, fmt::format("--global-multiplier {} outside domain (0, 2]",
                                          opts.global_multiplier)};
  }
  config.global_multiplier = opts.global_multiplier;
  return config;
}

OutputFormat make_format(const CommonOptions& opts) {
  auto format = parse_format(opts.format);
  if (!format) {
    throw Failure{kUsageOrIo,
                  fmt::format("--format must be one of table, json, csv (got '{}')", opts.format)};
  }
  return *format;
}

void check_threshold(const CommonOptions& opts) {
  if (opts.threshold && (*opts.threshold < 1 || *opts.threshold > 25)) {
    throw Failure{kUsageOrIo, fmt::format("--threshold {} outside 1..25", *opts.threshold)};
  }
}

int cmd_validate(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const LoadOptions load{opts.lenient};
  const auto catalog = load_document<Catalog>(
      opts.catalog_path, "catalog", [&](const std::string& t) { return load_catalog(t, load); },
      err);
  ValidationReport report = validate_catalog(catalog);
  if (!opts.portfolio_path.empty()) {
    const auto portfolio = load_document<Portfolio>(
        opts.portfolio_path, "portfolio",
        [&](const std::string& t) { return load_portfolio(t, load); }, err);
    report.merge(validate_portfolio(portfolio, catalog));
  }
  out << render_findings(report);
  return report.ok() ? kOk : kValidationFailure;
}

int cmd_assess(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const auto config = make_config(opts);
  const auto format = make_format(opts);
  check_threshold(opts);
  const auto in = load_inputs(opts, err);
  const auto result = assess_portfolio(in.portfolio, in.catalog, config);
  out << render_assessment(result, in.portfolio, in.catalog, format);
  return result.treatment_required.empty() ? kOk : kTreatmentRequired;
}

int cmd_compare(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const auto config = make_config(opts);
  const auto format = make_format(opts);
  const auto in = load_inputs(opts, err);
  out << render_comparison(compare_aggregations(in.portfolio, in.catalog, config), format);
  return kOk;
}

int cmd_whatif(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const auto config = make_config(opts);
  const auto format = make_format(opts);
  check_threshold(opts);
  const auto in = load_inputs(opts, err);
  const auto overrides = load_document<WhatIfOverride>(
      opts.overrides_path, "overrides",
      [&](const std::string& t) {
        return json::overrides_from_json(json::parse_document(t), LoadOptions{opts.lenient});
      },
      err);
  out << render_whatif(what_if(in.portfolio, in.catalog, config, overrides), format);
  return kOk;
}

void add_assessment_flags(CLI::App& cmd, CommonOptions& opts, bool with_method,
                          bool with_threshold) {
  if (with_method) {
    cmd.add_option("--method", opts.method, "Aggregation method: max, avg or geom")
        ->capture_default_str();
  }
  cmd.add_option("--global-multiplier", opts.global_multiplier,
                 "Environment-level multiplier M in (0, 2]")
      ->capture_default_str();
  if (with_threshold) {
    cmd.add_option("--threshold", opts.threshold,
                   "Treat chains with R >= threshold (default: portfolio context)");
  }
  cmd.add_option("--format", opts.format, "Output format: table, json or csv")
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kill-chain risk assessment for quantum communication systems", "qrisk"};
  app.require_subcommand(1);
  CommonOptions opts;
  app.add_flag("--lenient", opts.lenient, "Ignore unknown keys in input documents");

  auto* validate = app.add_subcommand("validate", "Validate a catalog and optionally a portfolio");
  validate->add_option("catalog", opts.catalog_path, "Catalog JSON file")->required();
  validate->add_option("portfolio", opts.portfolio_path, "Portfolio JSON file");

  auto* assess = app.add_subcommand("assess", "Rate every kill chain in a portfolio");
  assess->add_option("catalog", opts.catalog_path, "Catalog JSON file")->required();
  assess->add_option("portfolio", opts.portfolio_path, "Portfolio JSON file")->required();
  add_assessment_flags(*assess, opts, true, true);

  auto* compare = app.add_subcommand("compare", "Rate every chain under all three aggregations");
  compare->add_option("catalog", opts.catalog_path, "Catalog JSON file")->required();
  compare->add_option("portfolio", opts.portfolio_path, "Portfolio JSON file")->required();
  add_assessment_flags(*compare, opts, false, false);

  auto* whatif = app.add_subcommand("whatif", "Compare a baseline against overridden scores");
  whatif->add_option("catalog", opts.catalog_path, "Catalog JSON file")->required();
  whatif->add_option("portfolio", opts.portfolio_path, "Portfolio JSON file")->required();
  whatif->add_option("overrides", opts.overrides_path, "Overrides JSON file")->required();
  add_assessment_flags(*whatif, opts, true, true);

  // --lenient is accepted before or after the subcommand.
  for (auto* sub : {validate, assess, compare, whatif}) {
    sub->add_flag("--lenient", opts.lenient, "Ignore unknown keys in input documents");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsageOrIo;
  }

  try {
    if (validate->parsed()) return cmd_validate(opts, out, err);
    if (assess->parsed()) return cmd_assess(opts, out, err);
    if (compare->parsed()) return cmd_compare(opts, out, err);
    if (whatif->parsed()) return cmd_whatif(opts, out, err);
  } catch (const Failure& f) {
    if (!f.message.empty()) err << "error: " << f.message << "\n";
    return f.code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const DomainError& e) {
    // Flags are range-checked up front, so what remains is semantic (empty
    // portfolio, out-of-range override values).
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kUsageOrIo;
}

}  // namespace qrisk::cli
