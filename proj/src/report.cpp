#include "qrisk/report.hpp"

#include <fmt/format.h>

#include "qrisk/json_io.hpp"

namespace qrisk {

namespace {

std::string real(double v) { return fmt::format("{:.3f}", v); }
std::string sci(double v) { return fmt::format("{:.3e}", v); }

std::string band_transition(RiskBand before, RiskBand after) {
  if (before == after) return std::string(to_string(before));
  return fmt::format("{}->{}", to_string(before), to_string(after));
}

std::string assessment_table(const AssessmentResult& r, const Portfolio& portfolio,
                             const Catalog& catalog) {
  std::string out;
  out += fmt::format("Assessment  method={}  M={}  bounds=[{}, {}]  threshold={}\n",
                     to_string(r.config.method), real(r.config.global_multiplier),
                     real(r.bounds.lower), real(r.bounds.upper), r.acceptance_threshold);
  for (const auto& s : r.scenarios) {
    const auto& chain = portfolio.chains.at(s.chain_id);
    out += fmt::format("\n{}  {}\n", chain.id, chain.name);
    out += fmt::format("  {:>2}  {:<10}  {:<30}  {:>1}  {:>1}  {:>5}  {:>6}\n", "#", "phase",
                       "technique", "T", "E", "m", "l");
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
      const auto& step = chain.steps[i];
      out += fmt::format("  {:>2}  {:<10}  {:<30}  {:>1}  {:>1}  {:>5}  {:>6}\n", i,
                         to_string(step.phase), step.technique_id, step.threat, step.exposure,
                         real(step.multiplier), real(s.step_likelihoods[i]));
    }
    out += fmt::format("  L_raw {}  L_adj {}", real(s.raw_likelihood), real(s.adjusted_likelihood));
    if (s.success_probability) out += fmt::format("  P_succ {}", sci(*s.success_probability));
    out += "\n";
    out += fmt::format("  L {} ({})  I {} ({})  R {} ({})  {}\n", s.discrete_likelihood,
                       likelihood_label(s.discrete_likelihood), s.impact, impact_label(s.impact),
                       s.risk_value, to_string(s.risk_band),
                       s.treatment_required ? "TREATMENT REQUIRED" : "accepted");
    const auto& weakest = chain.steps[s.weakest_step_index];
    const auto* technique = catalog.find(weakest.technique_id);
    out += fmt::format("  weakest step: #{} {} (l = {})\n", s.weakest_step_index,
                       technique != nullptr ? technique->name : weakest.technique_id,
                       real(s.step_likelihoods[s.weakest_step_index]));
  }
  out += fmt::format("\n{} of {} chains require treatment (R >= {})\n", r.treatment_required.size(),
                     r.scenarios.size(), r.acceptance_threshold);
  return out;
}

std::string assessment_csv(const AssessmentResult& r) {
  std::string out =
      "chain_id,method,global_multiplier,raw_likelihood,adjusted_likelihood,success_probability,"
      "likelihood,impact,risk_value,risk_band,treatment_required,weakest_step_index\n";
  for (const auto& s : r.scenarios) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_quote(s.chain_id),
                       csv_quote(to_string(r.config.method)), real(r.config.global_multiplier),
                       real(s.raw_likelihood), real(s.adjusted_likelihood),
                       s.success_probability ? sci(*s.success_probability) : "",
                       s.discrete_likelihood, s.impact, s.risk_value,
                       csv_quote(to_string(s.risk_band)), s.treatment_required ? "true" : "false",
                       s.weakest_step_index);
  }
  return out;
}

std::string comparison_table(const Comparison& c) {
  std::string out = fmt::format("Aggregation comparison  M={}  bounds=[{}, {}]\n\n",
                                real(c.global_multiplier), real(c.bounds.lower),
                                real(c.bounds.upper));
  std::string header = fmt::format("{:<24}  {:>1}", "chain", "I");
  for (auto m : kAllMethods) {
    header += fmt::format("  {:<22}", fmt::format("{} (L_raw/L/R/band)", to_string(m)));
  }
  while (!header.empty() && header.back() == ' ') header.pop_back();
  out += header + "\n";
  for (const auto& row : c.rows) {
    std::string line = fmt::format("{:<24}  {:>1}", row.chain_id, row.impact);
    for (const auto& o : row.outcomes) {
      line += fmt::format("  {:<22}", fmt::format("{}/{}/{}/{}", real(o.raw_likelihood),
                                                  o.likelihood, o.risk_value, to_string(o.band)));
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string comparison_csv(const Comparison& c) {
  std::string out = "chain_id,impact";
  for (auto m : kAllMethods) {
    const auto p = to_string(m);
    out += fmt::format(",{0}_raw_likelihood,{0}_likelihood,{0}_risk_value,{0}_risk_band", p);
  }
  out += "\n";
  for (const auto& row : c.rows) {
    out += fmt::format("{},{}", csv_quote(row.chain_id), row.impact);
    for (const auto& o : row.outcomes) {
      out += fmt::format(",{},{},{},{}", real(o.raw_likelihood), o.likelihood, o.risk_value,
                         csv_quote(to_string(o.band)));
    }
    out += "\n";
  }
  return out;
}

std::string whatif_table(const WhatIfDiff& d) {
  const auto& b = d.baseline;
  const auto& m = d.modified;
  std::string out = fmt::format("What-if  method={}->{}  M={}->{}\n", to_string(b.config.method),
                                to_string(m.config.method), real(b.config.global_multiplier),
                                real(m.config.global_multiplier));
  out += fmt::format("bounds [{}, {}] -> [{}, {}]{}\n\n", real(b.bounds.lower),
                     real(b.bounds.upper), real(m.bounds.lower), real(m.bounds.upper),
                     d.bounds_changed ? "  (bounds changed: every chain rescored)" : "");
  out += fmt::format("{:<24}  {:<15}  {:<6}  {:<8}  {}\n", "chain", "L_adj", "L", "R", "band");
  for (const auto& delta : d.deltas) {
    const auto* before = b.find(delta.chain_id);
    const auto* after = m.find(delta.chain_id);
    std::string line = fmt::format(
        "{:<24}  {:<15}  {:<6}  {:<8}  {:<14}  {}", delta.chain_id,
        fmt::format("{}->{}", real(before->adjusted_likelihood), real(after->adjusted_likelihood)),
        fmt::format("{}->{}", before->discrete_likelihood, after->discrete_likelihood),
        fmt::format("{}->{}", before->risk_value, after->risk_value),
        band_transition(delta.baseline_band, delta.modified_band),
        delta.changed() ? fmt::format("dL {:+d}  dR {:+d}", delta.delta_likelihood, delta.delta_risk)
                        : "unchanged");
    out += line + "\n";
  }
  return out;
}

std::string whatif_csv(const WhatIfDiff& d) {
  std::string out =
      "chain_id,baseline_likelihood,modified_likelihood,delta_likelihood,baseline_risk_value,"
      "modified_risk_value,delta_risk,baseline_band,modified_band,band_changed,bounds_changed\n";
  for (const auto& delta : d.deltas) {
    const auto* before = d.baseline.find(delta.chain_id);
    const auto* after = d.modified.find(delta.chain_id);
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", csv_quote(delta.chain_id),
                       before->discrete_likelihood, after->discrete_likelihood,
                       delta.delta_likelihood, before->risk_value, after->risk_value,
                       delta.delta_risk, csv_quote(to_string(delta.baseline_band)),
                       csv_quote(to_string(delta.modified_band)),
                       delta.band_changed() ? "true" : "false",
                       d.bounds_changed ? "true" : "false");
  }
  return out;
}

}  // namespace

std::string_view to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Table: return "table";
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
  }
  return {};
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  for (auto f : {OutputFormat::Table, OutputFormat::Json, OutputFormat::Csv}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::string csv_quote(std::string_view field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_assessment(const AssessmentResult& result, const Portfolio& portfolio,
                              const Catalog& catalog, OutputFormat format) {
  switch (format) {
    case OutputFormat::Table: return assessment_table(result, portfolio, catalog);
    case OutputFormat::Json: return json::dump(json::to_json(result));
    case OutputFormat::Csv: return assessment_csv(result);
  }
  return {};
}

std::string render_comparison(const Comparison& comparison, OutputFormat format) {
  switch (format) {
    case OutputFormat::Table: return comparison_table(comparison);
    case OutputFormat::Json: return json::dump(json::to_json(comparison));
    case OutputFormat::Csv: return comparison_csv(comparison);
  }
  return {};
}

std::string render_whatif(const WhatIfDiff& diff, OutputFormat format) {
  switch (format) {
    case OutputFormat::Table: return whatif_table(diff);
    case OutputFormat::Json: return json::dump(json::to_json(diff));
    case OutputFormat::Csv: return whatif_csv(diff);
  }
  return {};
}

std::string render_findings(const ValidationReport& report) {
  std::string out;
  for (const auto& f : report.findings) {
    out += fmt::format("{:<8} {}{}{}\n", to_string(f.severity), f.path, f.path.empty() ? "" : ": ",
                       f.message);
  }
  out += fmt::format("{} errors, {} warnings\n", report.error_count(), report.warning_count());
  return out;
}

}  // namespace qrisk
