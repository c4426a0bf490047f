#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qrisk/errors.hpp"
#include "qrisk/json_io.hpp"

namespace qrisk {
namespace {

using json::Json;
using testing::config_for;
using testing::pns_catalog;
using testing::pns_portfolio;

TEST(JsonIo, ParseErrorOnMalformed) {
  EXPECT_THROW(json::parse_document("{"), ParseError);
  EXPECT_THROW(json::parse_document(""), ParseError);
}

TEST(JsonIo, DumpEndsWithNewline) {
  const auto text = json::dump(Json{{"a", 1}});
  EXPECT_EQ(text, "{\n  \"a\": 1\n}\n");
}

TEST(JsonIo, AssessmentSchema) {
  const auto r = assess_portfolio(pns_portfolio(), pns_catalog(),
                                  config_for(AggregationMethod::GeometricMean));
  const auto j = json::to_json(r);
  EXPECT_EQ(j["config"]["method"], "geom");
  EXPECT_EQ(j["bounds"]["lower"], 0.8);
  EXPECT_EQ(j["bounds"]["upper"], 37.5);
  const auto& s = j["scenarios"][0];
  EXPECT_EQ(s["chain_id"], "pns-qkd-link");
  EXPECT_EQ(s["step_likelihoods"][4], 7.2);
  EXPECT_EQ(s["risk_band"], "Medium");
  EXPECT_EQ(s["likelihood_label"], "Very unlikely");
  EXPECT_TRUE(s.contains("success_probability"));
  EXPECT_FALSE(j.contains("timestamp"));
}

TEST(JsonIo, AssessmentRoundTrip) {
  const auto r = assess_portfolio(pns_portfolio(), pns_catalog(),
                                  config_for(AggregationMethod::Maximum), "2026-10-18T00:00:00Z");
  EXPECT_EQ(json::assessment_from_json(json::parse_document(json::dump(json::to_json(r)))), r);
}

TEST(JsonIo, OverridesParse) {
  const auto o = json::overrides_from_json(json::parse_document(
      R"({"method": "avg", "global_multiplier": 1.5,
          "steps": [{"chain_id": "c", "step_index": 2, "multiplier": 0.5}],
          "impacts": [{"chain_id": "c", "impact": 3}]})"));
  EXPECT_EQ(o.method, AggregationMethod::Average);
  EXPECT_EQ(o.global_multiplier, 1.5);
  ASSERT_EQ(o.steps.size(), 1u);
  EXPECT_EQ(o.steps[0].step_index, 2u);
  EXPECT_EQ(o.steps[0].multiplier, 0.5);
  EXPECT_FALSE(o.steps[0].threat.has_value());
  EXPECT_EQ(o.impacts[0].impact, 3);
}

TEST(JsonIo, OverridesRejectBadShapes) {
  EXPECT_THROW(json::overrides_from_json(json::parse_document(R"({"method": "median"})")),
               ValidationError);
  EXPECT_THROW(json::overrides_from_json(json::parse_document(R"({"steps": [{"chain_id": "c"}]})")),
               ValidationError);
  EXPECT_THROW(json::overrides_from_json(json::parse_document(R"({"bogus": 1})")), ValidationError);
  EXPECT_NO_THROW(json::overrides_from_json(json::parse_document(R"({"bogus": 1})"), LoadOptions{true}));
  EXPECT_TRUE(json::overrides_from_json(json::parse_document("{}")).empty());
}

TEST(JsonIo, ChainErrorsNameStepIndex) {
  auto j = json::to_json(testing::pns_chain());
  j["steps"][3]["phase"] = "exploiting";
  try {
    json::chain_from_json(j);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.findings()[0].path, "steps[4].phase");
  }
}

TEST(JsonIo, MatrixHas25Cells) {
  const auto j = json::to_json(RiskMatrix::standard());
  ASSERT_EQ(j["cells"].size(), 25u);
  for (const auto& c : j["cells"]) {
    EXPECT_EQ(c["value"].get<int>(), c["likelihood"].get<int>() * c["impact"].get<int>());
  }
  EXPECT_EQ(j["cells"][9]["value"], 10);  // (L=2, I=5)
  EXPECT_EQ(j["cells"][9]["band"], "Medium");
}

TEST(JsonIo, ReportShape) {
  ValidationReport r;
  r.error("a", "bad");
  r.warning("b", "meh");
  const auto j = json::to_json(r);
  EXPECT_EQ(j["errors"], 1);
  EXPECT_EQ(j["warnings"], 1);
  EXPECT_EQ(j["findings"][0]["severity"], "error");
  EXPECT_EQ(j["findings"][1]["path"], "b");
}

}  // namespace
}  // namespace qrisk
