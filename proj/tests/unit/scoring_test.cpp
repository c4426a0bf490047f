#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qrisk/errors.hpp"
#include "qrisk/scoring.hpp"

namespace qrisk {
namespace {

using testing::kPnsLikelihoods;

TEST(StepLikelihood, PublishedRows) {
  EXPECT_EQ(step_likelihood(4, 4, 1.5), 24.0);
  EXPECT_EQ(step_likelihood(1, 1, 1.0), 1.0);
  EXPECT_EQ(step_likelihood(2, 4, 0.8), 6.4);
  EXPECT_EQ(step_likelihood(2, 3, 1.2), 7.2);
}

TEST(StepLikelihood, PnsChainExact) {
  const auto& chain = testing::pns_chain();
  ASSERT_EQ(chain.steps.size(), kPnsLikelihoods.size());
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const auto& s = chain.steps[i];
    EXPECT_EQ(step_likelihood(s.threat, s.exposure, s.multiplier), kPnsLikelihoods[i]) << "step " << i;
  }
}

TEST(StepLikelihood, DomainErrors) {
  EXPECT_THROW(step_likelihood(0, 1, 1.0), DomainError);
  EXPECT_THROW(step_likelihood(1, 6, 1.0), DomainError);
  EXPECT_THROW(step_likelihood(1, 1, 0.0), DomainError);
  EXPECT_THROW(step_likelihood(1, 1, 2.01), DomainError);
  EXPECT_THROW(step_likelihood(1, 1, std::nan("")), DomainError);
  EXPECT_EQ(step_likelihood(5, 5, 2.0), 50.0);
}

TEST(StepProbability, Examples) {
  EXPECT_DOUBLE_EQ(step_probability(24.0), 0.96);
  EXPECT_EQ(step_probability(25.0), 1.0);
  EXPECT_EQ(step_probability(50.0), 1.0);
  EXPECT_THROW(step_probability(0.0), DomainError);
  EXPECT_THROW(step_probability(-1.0), DomainError);
}

TEST(Aggregate, PnsMaximum) {
  EXPECT_EQ(aggregate(kPnsLikelihoods, AggregationMethod::Maximum).raw, 24.0);
}

TEST(Aggregate, PnsAverage) {
  const auto r = aggregate(kPnsLikelihoods, AggregationMethod::Average);
  EXPECT_NEAR(r.raw, 7.622, 1e-3);
  EXPECT_NEAR(r.raw, 68.6 / 9.0, 1e-12);
  EXPECT_FALSE(r.success_probability.has_value());
}

TEST(Aggregate, PnsGeometricAgainstDirectProduct) {
  // Oracle: plain product of min(1, l/25) and its N-th root.
  double product = 1.0;
  for (double l : kPnsLikelihoods) product *= std::min(1.0, l / 25.0);
  const double expected = 5.0 * std::pow(product, 1.0 / kPnsLikelihoods.size());

  const auto r = aggregate(kPnsLikelihoods, AggregationMethod::GeometricMean);
  EXPECT_NEAR(r.raw, 1.217, 5e-3);
  EXPECT_NEAR(r.raw, expected, 1e-12);
  ASSERT_TRUE(r.success_probability.has_value());
  EXPECT_NEAR(*r.success_probability, 3.0e-6, 0.05 * 3.0e-6);
  EXPECT_NEAR(*r.success_probability, product, 1e-18);
}

TEST(Aggregate, Singleton) {
  for (double x : {0.5, 7.0, 25.0, 40.0}) {
    const std::array<double, 1> v{x};
    EXPECT_EQ(aggregate(v, AggregationMethod::Maximum).raw, x);
    EXPECT_EQ(aggregate(v, AggregationMethod::Average).raw, x);
    EXPECT_DOUBLE_EQ(aggregate(v, AggregationMethod::GeometricMean).raw, 5.0 * std::min(1.0, x / 25.0));
  }
}

TEST(Aggregate, EmptyAndNonPositiveRejected) {
  EXPECT_THROW(aggregate(std::span<const double>{}, AggregationMethod::Maximum), DomainError);
  const std::array<double, 2> bad{1.0, 0.0};
  EXPECT_THROW(aggregate(bad, AggregationMethod::Average), DomainError);
}

TEST(Aggregate, LongChainDoesNotUnderflow) {
  // 2000 steps at p = 0.04: the plain product is 0.04^2000, far below DBL_MIN.
  std::vector<double> ls(2000, 1.0);
  const auto r = aggregate(ls, AggregationMethod::GeometricMean);
  EXPECT_NEAR(r.raw, 5.0 * 0.04, 1e-12);
}

TEST(Adjust, Examples) {
  AssessmentConfig c;
  EXPECT_EQ(adjust(24.0, c), 24.0);
  c.global_multiplier = 0.6;
  EXPECT_DOUBLE_EQ(adjust(10.0, c), 6.0);
  c.global_multiplier = 1.5;
  EXPECT_EQ(adjust(10.0, c), 15.0);
}

TEST(GlobalBounds, PnsPortfolio) {
  // Oracle: 1*1*min(m) and 5*5*max(m) over the fixture's multipliers.
  const auto& chain = testing::pns_chain();
  double lo = 2.0, hi = 0.0;
  for (const auto& s : chain.steps) {
    lo = std::min(lo, s.multiplier);
    hi = std::max(hi, s.multiplier);
  }
  const auto b = global_bounds(testing::pns_portfolio(), AssessmentConfig{});
  EXPECT_EQ(b.lower, 1.0 * 1.0 * lo);
  EXPECT_EQ(b.upper, 5.0 * 5.0 * hi);
  EXPECT_EQ(b.lower, 0.8);
  EXPECT_EQ(b.upper, 37.5);
}

TEST(GlobalBounds, UnitAndScaled) {
  const std::array<double, 3> ones{1.0, 1.0, 1.0};
  EXPECT_EQ(global_bounds(ones, 1.0), (LikelihoodBounds{1.0, 25.0}));
  EXPECT_EQ(global_bounds(ones, 2.0), (LikelihoodBounds{2.0, 50.0}));
  EXPECT_THROW(global_bounds(std::span<const double>{}, 1.0), DomainError);
  EXPECT_THROW(global_bounds(Portfolio{}, AssessmentConfig{}), DomainError);
}

TEST(Discretize, PublishedLevels) {
  const LikelihoodBounds b{0.8, 37.5};
  EXPECT_EQ(discretize(24.0, b), 4);
  EXPECT_EQ(discretize(7.622, b), 1);
  EXPECT_EQ(discretize(1.217, b), 1);
  EXPECT_EQ(discretize(37.5, b), 5);
}

TEST(Discretize, EdgesAndClamps) {
  const LikelihoodBounds b{0.0 + 1.0, 26.0};  // interval width 5
  EXPECT_EQ(discretize(0.5, b), 1);
  EXPECT_EQ(discretize(1.0, b), 1);
  EXPECT_EQ(discretize(6.0, b), 2);  // exact edge goes up
  EXPECT_EQ(discretize(5.999, b), 1);
  EXPECT_EQ(discretize(21.0, b), 5);
  EXPECT_EQ(discretize(100.0, b), 5);
  EXPECT_EQ(discretize(6.0, b, 0.0), 2);
  EXPECT_THROW(discretize(1.0, {2.0, 2.0}), DomainError);
  EXPECT_THROW(discretize(std::nan(""), b), DomainError);
}

TEST(RiskLookup, PublishedCells) {
  EXPECT_EQ(risk_lookup(4, 5), (RiskCell{20, RiskBand::High}));
  EXPECT_EQ(risk_lookup(1, 5), (RiskCell{5, RiskBand::Medium}));
  EXPECT_EQ(risk_lookup(1, 1), (RiskCell{1, RiskBand::Low}));
  EXPECT_EQ(risk_lookup(2, 5), (RiskCell{10, RiskBand::Medium}));
  EXPECT_THROW(risk_lookup(0, 3), DomainError);
  EXPECT_THROW(risk_lookup(3, 6), DomainError);
}

TEST(RiskLookup, SameValueDifferentBands) {
  EXPECT_EQ(risk_lookup(2, 2).band, RiskBand::Low);
  EXPECT_EQ(risk_lookup(1, 4).band, RiskBand::Medium);
  EXPECT_EQ(risk_lookup(4, 1).band, RiskBand::Medium);
}

TEST(RiskMatrix, RejectsInconsistentTables) {
  auto cells = RiskMatrix::standard().cells();
  cells[1][4].value = 12;
  EXPECT_THROW(RiskMatrix{cells}, DomainError);
  cells = RiskMatrix::standard().cells();
  cells[4][4].band = RiskBand::Low;
  EXPECT_THROW(RiskMatrix{cells}, DomainError);
}

TEST(RecommendMethod, Contexts) {
  EXPECT_EQ(recommend_method("safety-critical").method, AggregationMethod::Maximum);
  EXPECT_EQ(recommend_method("balanced").method, AggregationMethod::GeometricMean);
  EXPECT_EQ(recommend_method("early-stage").method, AggregationMethod::Average);
  const auto reg = recommend_method("regulatory-compliance");
  EXPECT_EQ(reg.method, AggregationMethod::Maximum);
  EXPECT_EQ(reg.alternative, AggregationMethod::GeometricMean);
  EXPECT_EQ(recommend_method().method, AggregationMethod::GeometricMean);
  EXPECT_THROW(recommend_method("reckless"), DomainError);
}

TEST(ValidateConfig, GlobalMultiplierDomain) {
  AssessmentConfig c;
  c.global_multiplier = 0.0;
  EXPECT_THROW(validate_config(c), DomainError);
  c.global_multiplier = 2.0;
  EXPECT_NO_THROW(validate_config(c));
  c.boundary_epsilon = -1.0;
  EXPECT_THROW(validate_config(c), DomainError);
}

TEST(Labels, Wire) {
  EXPECT_EQ(likelihood_label(1), "Very unlikely");
  EXPECT_EQ(likelihood_label(5), "Frequent");
  EXPECT_EQ(impact_label(5), "Very high");
  EXPECT_EQ(parse_method("geom"), AggregationMethod::GeometricMean);
  EXPECT_FALSE(parse_method("median").has_value());
}

}  // namespace
}  // namespace qrisk
