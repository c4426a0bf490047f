#include "qrisk/json_io.hpp"

#include <set>

#include <fmt/format.h>

#include "qrisk/errors.hpp"

namespace qrisk::json {

namespace {

std::string join(std::string_view path, std::string_view key) {
  if (path.empty()) return std::string(key);
  return fmt::format("{}.{}", path, key);
}

std::string index(std::string_view path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

std::string_view type_name(const Json& value) { return value.type_name(); }

// Out-of-range values still need to reach the range checks with their sign.
int narrow(std::int64_t v) {
  return static_cast<int>(std::clamp<std::int64_t>(v, std::numeric_limits<int>::min(),
                                                   std::numeric_limits<int>::max()));
}

// Typed field access over one JSON object. Problems become findings rather
// than exceptions so a single load reports every defect at once.
class ObjectReader {
 public:
  ObjectReader(const Json& value, std::string path, ValidationReport& report, bool lenient)
      : value_(value), path_(std::move(path)), report_(report), lenient_(lenient) {
    ok_ = value_.is_object();
    if (!ok_) {
      report_.error(path_, fmt::format("expected an object, got {}", type_name(value_)));
    }
  }

  bool ok() const { return ok_; }
  const std::string& path() const { return path_; }

  const Json* field(std::string_view key, bool required) {
    known_.insert(std::string(key));
    if (!ok_) return nullptr;
    auto it = value_.find(key);
    if (it == value_.end() || (!required && it->is_null())) {
      if (required) report_.error(join(path_, key), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string(std::string_view key, bool required = true) {
    const auto* v = field(key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      report_.error(join(path_, key), fmt::format("expected a string, got {}", type_name(*v)));
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::int64_t> integer(std::string_view key, bool required = true) {
    const auto* v = field(key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer()) {
      report_.error(join(path_, key), fmt::format("expected an integer, got {}", type_name(*v)));
      return std::nullopt;
    }
    if (v->is_number_unsigned()) {
      const auto u = v->get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        report_.error(join(path_, key), "integer out of range");
        return std::nullopt;
      }
      return static_cast<std::int64_t>(u);
    }
    return v->get<std::int64_t>();
  }

  // Integer constrained to lo..hi.
  std::optional<int> ranged(std::string_view key, std::int64_t lo, std::int64_t hi,
                            bool required = true) {
    auto v = integer(key, required);
    if (!v) return std::nullopt;
    if (*v < lo || *v > hi) {
      report_.error(join(path_, key), fmt::format("{} {} outside {}..{}", key, *v, lo, hi));
      return std::nullopt;
    }
    return static_cast<int>(*v);
  }

  std::optional<double> number(std::string_view key, bool required = true) {
    const auto* v = field(key, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      report_.error(join(path_, key), fmt::format("expected a number, got {}", type_name(*v)));
      return std::nullopt;
    }
    return v->get<double>();
  }

  const Json* array(std::string_view key, bool required = true) {
    const auto* v = field(key, required);
    if (v == nullptr) return nullptr;
    if (!v->is_array()) {
      report_.error(join(path_, key), fmt::format("expected an array, got {}", type_name(*v)));
      return nullptr;
    }
    return v;
  }

  std::vector<std::string> strings(std::string_view key, bool required = true) {
    std::vector<std::string> out;
    const auto* arr = array(key, required);
    if (arr == nullptr) return out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& item = (*arr)[i];
      if (!item.is_string()) {
        report_.error(index(join(path_, key), i),
                      fmt::format("expected a string, got {}", type_name(item)));
        continue;
      }
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  template <class E>
  std::optional<E> enumeration(std::string_view key) {
    auto name = string(key);
    if (!name) return std::nullopt;
    auto parsed = parse_enum<E>(*name);
    if (!parsed) {
      std::string allowed;
      for (const auto& [v, n] : EnumNames<E>::values) {
        if (!allowed.empty()) allowed += ", ";
        allowed += n;
      }
      report_.error(join(path_, key),
                    fmt::format("unknown {} '{}' (expected one of: {})", EnumNames<E>::kind, *name,
                                allowed));
    }
    return parsed;
  }

  /// Reports keys that no accessor asked for (strict mode only).
  void finish() {
    if (!ok_ || lenient_) return;
    for (const auto& [key, v] : value_.items()) {
      if (!known_.contains(key)) report_.error(join(path_, key), "unknown field");
    }
  }

 private:
  const Json& value_;
  std::string path_;
  ValidationReport& report_;
  bool lenient_;
  bool ok_ = false;
  std::set<std::string, std::less<>> known_;
};

void throw_if_errors(ValidationReport& report) {
  if (!report.ok()) throw ValidationError(std::move(report.findings));
}

Technique read_technique(const Json& value, const std::string& path, ValidationReport& report,
                         bool lenient) {
  ObjectReader r(value, path, report, lenient);
  Technique t;
  t.id = r.string("id").value_or("");
  t.name = r.string("name").value_or("");
  t.description = r.string("description", false).value_or("");
  t.tactics = r.strings("tactics");
  if (r.ok() && value.contains("tactics") && value["tactics"].is_array() &&
      value["tactics"].empty()) {
    report.error(join(path, "tactics"), "technique must list at least one tactic");
  }
  if (auto v = r.enumeration<AttackObjective>("objective")) t.objective = *v;
  if (auto v = r.enumeration<AttackMechanism>("mechanism")) t.mechanism = *v;
  if (auto v = r.enumeration<DeploymentEnvironment>("environment")) t.environment = *v;
  if (auto v = r.ranged("capability", 1, 5)) t.capability = AdversaryCapability{*v};
  if (auto v = r.enumeration<LifecyclePhase>("lifecycle")) t.lifecycle = *v;
  if (auto v = r.enumeration<SystemLayer>("layer")) t.layer = *v;
  if (auto v = r.ranged("default_threat", 1, 5)) t.default_threat = *v;
  if (auto v = r.ranged("default_exposure", 1, 5)) t.default_exposure = *v;
  t.indicators = r.strings("indicators", false);
  t.countermeasures = r.strings("countermeasures", false);
  r.finish();
  return t;
}

ChainStep read_step(const Json& value, const std::string& path, ValidationReport& report,
                    bool lenient) {
  ObjectReader r(value, path, report, lenient);
  ChainStep s;
  s.technique_id = r.string("technique_id").value_or("");
  if (auto name = r.string("phase")) {
    if (auto phase = parse_phase(*name)) {
      s.phase = *phase;
    } else {
      report.error(join(path, "phase"),
                   fmt::format("unknown phase '{}' (expected knowing, entering, finding or "
                               "exploiting)",
                               *name));
    }
  }
  if (auto v = r.integer("threat")) s.threat = narrow(*v);
  if (auto v = r.integer("exposure")) {
    s.exposure = narrow(*v);
  }
  if (auto v = r.number("multiplier")) s.multiplier = *v;
  s.note = r.string("note", false);
  r.finish();
  return s;
}

KillChain read_chain(const Json& value, const std::string& path, ValidationReport& report,
                     bool lenient) {
  ObjectReader r(value, path, report, lenient);
  KillChain c;
  c.id = r.string("id").value_or("");
  c.name = r.string("name").value_or("");
  c.description = r.string("description", false).value_or("");
  if (const auto* impact = r.field("impact", true)) {
    ObjectReader ir(*impact, join(path, "impact"), report, lenient);
    if (auto v = ir.integer("level")) {
      c.impact.level = narrow(*v);
    }
    c.impact.rationale = ir.string("rationale", false).value_or("");
    ir.finish();
  }
  if (const auto* steps = r.array("steps")) {
    for (std::size_t i = 0; i < steps->size(); ++i) {
      c.steps.push_back(read_step((*steps)[i], index(join(path, "steps"), i), report, lenient));
    }
  }
  r.finish();
  // Range and phase-order checks; values were parsed as-is so these report
  // at their own paths.
  if (r.ok()) report.merge(check_chain(c), path);
  return c;
}

Json step_to_json(const ChainStep& s) {
  Json j{{"technique_id", s.technique_id},
         {"phase", to_string(s.phase)},
         {"threat", s.threat},
         {"exposure", s.exposure},
         {"multiplier", s.multiplier}};
  if (s.note) j["note"] = *s.note;
  return j;
}

std::string format_method_list() { return "max, avg, geom"; }

}  // namespace

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("malformed JSON: {}", e.what()));
  }
}

std::string dump(const Json& value) { return value.dump(2) + "\n"; }

Json to_json(const Catalog& catalog) {
  Json tactics = Json::array();
  for (const auto& [id, t] : catalog.tactics) {
    tactics.push_back({{"id", t.id}, {"name", t.name}, {"description", t.description}});
  }
  Json techniques = Json::array();
  for (const auto& [id, t] : catalog.techniques) {
    techniques.push_back({{"id", t.id},
                          {"name", t.name},
                          {"description", t.description},
                          {"tactics", t.tactics},
                          {"objective", enum_name(t.objective)},
                          {"mechanism", enum_name(t.mechanism)},
                          {"environment", enum_name(t.environment)},
                          {"capability", t.capability.tier},
                          {"lifecycle", enum_name(t.lifecycle)},
                          {"layer", enum_name(t.layer)},
                          {"default_threat", t.default_threat},
                          {"default_exposure", t.default_exposure},
                          {"indicators", t.indicators},
                          {"countermeasures", t.countermeasures}});
  }
  return {{"version", catalog.version}, {"tactics", tactics}, {"techniques", techniques}};
}

Catalog catalog_from_json(const Json& document, const LoadOptions& options) {
  ValidationReport report;
  ObjectReader root(document, "", report, options.lenient);
  if (!root.ok()) throw_if_errors(report);

  Catalog catalog;
  catalog.version = root.string("version").value_or("");

  if (const auto* tactics = root.array("tactics")) {
    for (std::size_t i = 0; i < tactics->size(); ++i) {
      const auto path = index("tactics", i);
      ObjectReader r((*tactics)[i], path, report, options.lenient);
      TacticDefinition t;
      t.id = r.string("id").value_or("");
      t.name = r.string("name").value_or("");
      t.description = r.string("description", false).value_or("");
      r.finish();
      if (!r.ok() || t.id.empty()) continue;
      if (!catalog.tactics.emplace(t.id, t).second) {
        report.error(path + ".id", fmt::format("duplicate tactic id '{}'", t.id));
      }
    }
  }

  if (const auto* techniques = root.array("techniques")) {
    for (std::size_t i = 0; i < techniques->size(); ++i) {
      const auto path = index("techniques", i);
      auto t = read_technique((*techniques)[i], path, report, options.lenient);
      for (std::size_t k = 0; k < t.tactics.size(); ++k) {
        if (!catalog.tactics.contains(t.tactics[k])) {
          report.error(index(path + ".tactics", k), fmt::format("unknown tactic '{}'", t.tactics[k]));
        }
      }
      if (t.id.empty()) continue;
      const auto id = t.id;
      if (!catalog.techniques.emplace(id, std::move(t)).second) {
        report.error(path + ".id", fmt::format("duplicate technique id '{}'", id));
      }
    }
  }
  root.finish();
  throw_if_errors(report);

  // Anything the field-level pass could not see (e.g. a tactic listed twice).
  auto semantic = validate_catalog(catalog);
  throw_if_errors(semantic);
  return catalog;
}

Json to_json(const KillChain& chain) {
  Json steps = Json::array();
  for (const auto& s : chain.steps) steps.push_back(step_to_json(s));
  return {{"id", chain.id},
          {"name", chain.name},
          {"description", chain.description},
          {"impact", {{"level", chain.impact.level}, {"rationale", chain.impact.rationale}}},
          {"steps", steps}};
}

KillChain chain_from_json(const Json& document, const LoadOptions& options) {
  ValidationReport report;
  auto chain = read_chain(document, "", report, options.lenient);
  throw_if_errors(report);
  return chain;
}

Json to_json(const Portfolio& portfolio) {
  Json roles = Json::array();
  for (const auto& r : portfolio.context.roles) {
    roles.push_back({{"role", r.role}, {"responsibility", r.responsibility}});
  }
  Json chains = Json::array();
  for (const auto& [id, c] : portfolio.chains) chains.push_back(to_json(c));
  return {{"context",
           {{"scope", portfolio.context.scope},
            {"acceptance_threshold", portfolio.context.acceptance_threshold},
            {"roles", roles}}},
          {"catalog_version", portfolio.catalog_version},
          {"chains", chains}};
}

Portfolio portfolio_from_json(const Json& document, const LoadOptions& options) {
  ValidationReport report;
  ObjectReader root(document, "", report, options.lenient);
  if (!root.ok()) throw_if_errors(report);

  Portfolio portfolio;
  if (const auto* context = root.field("context", true)) {
    ObjectReader cr(*context, "context", report, options.lenient);
    portfolio.context.scope = cr.string("scope", false).value_or("");
    if (auto v = cr.ranged("acceptance_threshold", 1, 25)) {
      portfolio.context.acceptance_threshold = *v;
    }
    if (const auto* roles = cr.array("roles", false)) {
      for (std::size_t i = 0; i < roles->size(); ++i) {
        ObjectReader rr((*roles)[i], index("context.roles", i), report, options.lenient);
        RoleAssignment role;
        role.role = rr.string("role").value_or("");
        role.responsibility = rr.string("responsibility", false).value_or("");
        rr.finish();
        portfolio.context.roles.push_back(std::move(role));
      }
    }
    cr.finish();
  }
  portfolio.catalog_version = root.string("catalog_version", false).value_or("");
  if (const auto* chains = root.array("chains")) {
    for (std::size_t i = 0; i < chains->size(); ++i) {
      const auto path = index("chains", i);
      auto chain = read_chain((*chains)[i], path, report, options.lenient);
      if (chain.id.empty()) continue;
      const auto id = chain.id;
      if (!portfolio.chains.emplace(id, std::move(chain)).second) {
        report.error(path + ".id", fmt::format("duplicate chain id '{}'", id));
      }
    }
  }
  root.finish();
  throw_if_errors(report);
  return portfolio;
}

Json to_json(const WhatIfOverride& o) {
  Json j = Json::object();
  if (o.method) j["method"] = to_string(*o.method);
  if (o.global_multiplier) j["global_multiplier"] = *o.global_multiplier;
  Json steps = Json::array();
  for (const auto& s : o.steps) {
    Json js{{"chain_id", s.chain_id}, {"step_index", s.step_index}};
    if (s.threat) js["threat"] = *s.threat;
    if (s.exposure) js["exposure"] = *s.exposure;
    if (s.multiplier) js["multiplier"] = *s.multiplier;
    steps.push_back(std::move(js));
  }
  Json impacts = Json::array();
  for (const auto& i : o.impacts) impacts.push_back({{"chain_id", i.chain_id}, {"impact", i.impact}});
  j["steps"] = steps;
  j["impacts"] = impacts;
  return j;
}

WhatIfOverride overrides_from_json(const Json& document, const LoadOptions& options) {
  ValidationReport report;
  ObjectReader root(document, "", report, options.lenient);
  if (!root.ok()) throw_if_errors(report);

  WhatIfOverride o;
  if (auto name = root.string("method", false)) {
    o.method = parse_method(*name);
    if (!o.method) {
      report.error("method", fmt::format("unknown method '{}' (expected one of: {})", *name,
                                         format_method_list()));
    }
  }
  o.global_multiplier = root.number("global_multiplier", false);
  if (const auto* steps = root.array("steps", false)) {
    for (std::size_t i = 0; i < steps->size(); ++i) {
      ObjectReader r((*steps)[i], index("steps", i), report, options.lenient);
      StepOverride s;
      s.chain_id = r.string("chain_id").value_or("");
      if (auto v = r.integer("step_index")) {
        if (*v < 0) {
          report.error(index("steps", i) + ".step_index", "step_index must be >= 0");
        } else {
          s.step_index = static_cast<std::size_t>(*v);
        }
      }
      if (auto v = r.integer("threat", false)) s.threat = narrow(*v);
      if (auto v = r.integer("exposure", false)) s.exposure = narrow(*v);
      s.multiplier = r.number("multiplier", false);
      r.finish();
      o.steps.push_back(std::move(s));
    }
  }
  if (const auto* impacts = root.array("impacts", false)) {
    for (std::size_t i = 0; i < impacts->size(); ++i) {
      ObjectReader r((*impacts)[i], index("impacts", i), report, options.lenient);
      ImpactOverride io;
      io.chain_id = r.string("chain_id").value_or("");
      if (auto v = r.integer("impact")) io.impact = narrow(*v);
      r.finish();
      o.impacts.push_back(std::move(io));
    }
  }
  root.finish();
  throw_if_errors(report);
  return o;
}

Json to_json(const AssessmentConfig& config) {
  return {{"method", to_string(config.method)},
          {"global_multiplier", config.global_multiplier},
          {"n_max", AssessmentConfig::n_max},
          {"boundary_epsilon", config.boundary_epsilon}};
}

Json to_json(const ScenarioResult& s) {
  Json j{{"chain_id", s.chain_id},
         {"step_likelihoods", s.step_likelihoods},
         {"raw_likelihood", s.raw_likelihood},
         {"adjusted_likelihood", s.adjusted_likelihood}};
  if (s.success_probability) j["success_probability"] = *s.success_probability;
  j["discrete_likelihood"] = s.discrete_likelihood;
  j["likelihood_label"] = likelihood_label(s.discrete_likelihood);
  j["impact"] = s.impact;
  j["impact_label"] = impact_label(s.impact);
  j["risk_value"] = s.risk_value;
  j["risk_band"] = to_string(s.risk_band);
  j["treatment_required"] = s.treatment_required;
  j["weakest_step_index"] = s.weakest_step_index;
  return j;
}

Json to_json(const AssessmentResult& result) {
  Json scenarios = Json::array();
  for (const auto& s : result.scenarios) scenarios.push_back(to_json(s));
  Json j{{"config", to_json(result.config)},
         {"acceptance_threshold", result.acceptance_threshold},
         {"bounds", {{"lower", result.bounds.lower}, {"upper", result.bounds.upper}}},
         {"scenarios", scenarios},
         {"treatment_required", result.treatment_required}};
  if (!result.timestamp.empty()) j["timestamp"] = result.timestamp;
  return j;
}

AssessmentResult assessment_from_json(const Json& document) {
  try {
    AssessmentResult r;
    const auto& config = document.at("config");
    auto method = parse_method(config.at("method").get<std::string>());
    if (!method) throw ParseError("unknown method in assessment document");
    r.config.method = *method;
    r.config.global_multiplier = config.at("global_multiplier").get<double>();
    r.config.boundary_epsilon = config.at("boundary_epsilon").get<double>();
    r.acceptance_threshold = document.at("acceptance_threshold").get<int>();
    r.bounds = {document.at("bounds").at("lower").get<double>(),
                document.at("bounds").at("upper").get<double>()};
    for (const auto& js : document.at("scenarios")) {
      ScenarioResult s;
      s.chain_id = js.at("chain_id").get<std::string>();
      s.step_likelihoods = js.at("step_likelihoods").get<std::vector<double>>();
      s.raw_likelihood = js.at("raw_likelihood").get<double>();
      s.adjusted_likelihood = js.at("adjusted_likelihood").get<double>();
      if (js.contains("success_probability")) {
        s.success_probability = js.at("success_probability").get<double>();
      }
      s.discrete_likelihood = js.at("discrete_likelihood").get<int>();
      s.impact = js.at("impact").get<int>();
      s.risk_value = js.at("risk_value").get<int>();
      auto band = parse_band(js.at("risk_band").get<std::string>());
      if (!band) throw ParseError("unknown risk band in assessment document");
      s.risk_band = *band;
      s.treatment_required = js.at("treatment_required").get<bool>();
      s.weakest_step_index = js.at("weakest_step_index").get<std::size_t>();
      r.scenarios.push_back(std::move(s));
    }
    r.treatment_required = document.at("treatment_required").get<std::vector<std::string>>();
    if (document.contains("timestamp")) r.timestamp = document.at("timestamp").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("assessment document does not match schema: {}", e.what()));
  }
}

Json to_json(const WhatIfDiff& diff) {
  Json deltas = Json::array();
  for (const auto& d : diff.deltas) {
    deltas.push_back({{"chain_id", d.chain_id},
                      {"delta_likelihood", d.delta_likelihood},
                      {"delta_risk", d.delta_risk},
                      {"baseline_band", to_string(d.baseline_band)},
                      {"modified_band", to_string(d.modified_band)},
                      {"band_changed", d.band_changed()},
                      {"changed", d.changed()}});
  }
  return {{"baseline", to_json(diff.baseline)},
          {"modified", to_json(diff.modified)},
          {"deltas", deltas},
          {"bounds_changed", diff.bounds_changed}};
}

Json to_json(const Comparison& comparison) {
  Json rows = Json::array();
  for (const auto& row : comparison.rows) {
    Json j{{"chain_id", row.chain_id}, {"impact", row.impact}};
    for (const auto& o : row.outcomes) {
      j[std::string(to_string(o.method))] = {{"raw_likelihood", o.raw_likelihood},
                                             {"likelihood", o.likelihood},
                                             {"risk_value", o.risk_value},
                                             {"risk_band", to_string(o.band)}};
    }
    rows.push_back(std::move(j));
  }
  return {{"bounds", {{"lower", comparison.bounds.lower}, {"upper", comparison.bounds.upper}}},
          {"global_multiplier", comparison.global_multiplier},
          {"rows", rows}};
}

Json to_json(const RiskMatrix& matrix) {
  Json cells = Json::array();
  for (int l = 1; l <= kScaleMax; ++l) {
    for (int i = 1; i <= kScaleMax; ++i) {
      const auto& c = matrix.cell(l, i);
      cells.push_back({{"likelihood", l},
                       {"impact", i},
                       {"value", c.value},
                       {"band", to_string(c.band)},
                       {"likelihood_label", likelihood_label(l)},
                       {"impact_label", impact_label(i)}});
    }
  }
  return {{"cells", cells}};
}

Json to_json(const Finding& finding) {
  return {{"severity", to_string(finding.severity)},
          {"path", finding.path},
          {"message", finding.message}};
}

Json to_json(const ValidationReport& report) {
  Json findings = Json::array();
  for (const auto& f : report.findings) findings.push_back(to_json(f));
  return {{"errors", report.error_count()},
          {"warnings", report.warning_count()},
          {"findings", findings}};
}

}  // namespace qrisk::json

namespace qrisk {

Catalog load_catalog(std::string_view document, const LoadOptions& options) {
  return json::catalog_from_json(json::parse_document(document), options);
}

std::string serialize_catalog(const Catalog& catalog) { return json::dump(json::to_json(catalog)); }

KillChain load_chain(std::string_view document, const LoadOptions& options) {
  return json::chain_from_json(json::parse_document(document), options);
}

std::string serialize_chain(const KillChain& chain) { return json::dump(json::to_json(chain)); }

Portfolio load_portfolio(std::string_view document, const LoadOptions& options) {
  return json::portfolio_from_json(json::parse_document(document), options);
}

std::string serialize_portfolio(const Portfolio& portfolio) {
  return json::dump(json::to_json(portfolio));
}

}  // namespace qrisk
