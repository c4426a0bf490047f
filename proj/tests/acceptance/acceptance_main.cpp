// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "property_checks.hpp"
#include "qrisk/assessment.hpp"
#include "qrisk/cli.hpp"
#include "qrisk/json_io.hpp"

namespace {

using namespace qrisk;
using namespace qrisk::testing;

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, std::string what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + std::move(what));
    }
  }
  void note(std::string what) { notes.push_back(std::move(what)); }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Verdict pns_reproduction() {
  Verdict v;
  const auto start = Clock::now();
  const auto& catalog = pns_catalog();
  const auto& portfolio = pns_portfolio();

  struct Expected {
    AggregationMethod method;
    int likelihood;
    int risk;
    RiskBand band;
  };
  const Expected expected[] = {{AggregationMethod::Maximum, 4, 20, RiskBand::High},
                               {AggregationMethod::Average, 1, 5, RiskBand::Medium},
                               {AggregationMethod::GeometricMean, 1, 5, RiskBand::Medium}};
  for (const auto& e : expected) {
    const auto r = assess_portfolio(portfolio, catalog, config_for(e.method));
    const auto& s = r.scenarios.at(0);
    const auto m = to_string(e.method);
    v.require(s.step_likelihoods.size() == kPnsLikelihoods.size() &&
                  std::equal(s.step_likelihoods.begin(), s.step_likelihoods.end(),
                             kPnsLikelihoods.begin()),
              fmt::format("{}: step likelihoods not exactly {{2, 4, 9, 4, 7.2, 6.4, 24, 6, 6}}", m));
    switch (e.method) {
      case AggregationMethod::Maximum:
        v.require(s.raw_likelihood == 24.0, fmt::format("max L_raw {} != 24", s.raw_likelihood));
        break;
      case AggregationMethod::Average:
        v.require(std::abs(s.raw_likelihood - 7.6222) <= 1e-3,
                  fmt::format("avg L_raw {} not 7.6222 +- 1e-3", s.raw_likelihood));
        break;
      case AggregationMethod::GeometricMean: {
        v.require(std::abs(s.raw_likelihood - 1.217) <= 5e-3,
                  fmt::format("geom L_raw {} not 1.217 +- 5e-3", s.raw_likelihood));
        const double p = s.success_probability.value_or(0.0);
        v.require(std::abs(p - 3.0e-6) <= 0.05 * 3.0e-6,
                  fmt::format("P_succ {} not within 5% of 3.0e-6", p));
        v.note(fmt::format("P_succ={:.4e}", p));
        break;
      }
    }
    v.require(s.discrete_likelihood == e.likelihood && s.risk_value == e.risk && s.risk_band == e.band,
              fmt::format("{}: got L={} R={} {}", m, s.discrete_likelihood, s.risk_value,
                          to_string(s.risk_band)));
    v.note(fmt::format("{}: L_raw={:.4f} L={} R={} {}", m, s.raw_likelihood, s.discrete_likelihood,
                       s.risk_value, to_string(s.risk_band)));
  }
  const double t = seconds_since(start);
  v.require(t < 1.0, fmt::format("runtime {:.3f}s >= 1s", t));
  v.note(fmt::format("{:.3f}s", t));
  return v;
}

Verdict bounds_reproduction() {
  Verdict v;
  const auto start = Clock::now();
  const auto& portfolio = pns_portfolio();
  const auto bounds = global_bounds(portfolio, AssessmentConfig{});
  v.require(bounds.lower == 0.8 && bounds.upper == 37.5,
            fmt::format("bounds ({}, {}) != (0.8, 37.5)", bounds.lower, bounds.upper));

  // Every method's L under the real bounds, then under each +-10% variant.
  std::vector<double> adjusted;
  for (auto method : kAllMethods) {
    adjusted.push_back(assess_portfolio(portfolio, pns_catalog(), config_for(method))
                           .scenarios.at(0)
                           .adjusted_likelihood);
  }
  const std::pair<std::string, LikelihoodBounds> variants[] = {
      {"lower-10%", {bounds.lower * 0.9, bounds.upper}},
      {"lower+10%", {bounds.lower * 1.1, bounds.upper}},
      {"upper-10%", {bounds.lower, bounds.upper * 0.9}},
      {"upper+10%", {bounds.lower, bounds.upper * 1.1}},
  };
  bool any_changed = false;
  for (const auto& [name, perturbed] : variants) {
    std::string changes;
    for (std::size_t m = 0; m < kAllMethods.size(); ++m) {
      const int base = discretize(adjusted[m], bounds);
      const int moved = discretize(adjusted[m], perturbed);
      if (base != moved) {
        any_changed = true;
        changes += fmt::format(" {} L {}->{}", to_string(kAllMethods[m]), base, moved);
      }
    }
    if (!changes.empty()) v.note(name + ":" + changes);
  }
  v.require(any_changed, "no +-10% perturbation of the bounds changed any discretized L");
  const double t = seconds_since(start);
  v.require(t < 1.0, fmt::format("runtime {:.3f}s >= 1s", t));
  v.note(fmt::format("{:.3f}s", t));
  return v;
}

Verdict monte_carlo() {
  Verdict v;
  const auto start = Clock::now();
  const auto& chain = pns_chain();
  std::vector<double> p;
  for (const auto& s : chain.steps) {
    p.push_back(step_probability(step_likelihood(s.threat, s.exposure, s.multiplier)));
  }
  const auto analytic =
      *aggregate(assess_portfolio(pns_portfolio(), pns_catalog(),
                                  config_for(AggregationMethod::GeometricMean))
                     .scenarios.at(0)
                     .step_likelihoods,
                 AggregationMethod::GeometricMean)
           .success_probability;

  constexpr std::uint64_t kTrials = 10'000'000;
  constexpr std::uint64_t kSeed = 20261018;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uint64_t successes = 0;
  for (std::uint64_t trial = 0; trial < kTrials; ++trial) {
    bool all = true;
    for (double pi : p) {
      if (!(u(rng) < pi)) {
        all = false;
        break;
      }
    }
    successes += all ? 1 : 0;
  }
  const double freq = static_cast<double>(successes) / static_cast<double>(kTrials);
  const double se = std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(kTrials));
  const double z = (freq - analytic) / se;
  v.require(std::abs(z) <= 3.0, fmt::format("|z| = {:.2f} > 3", std::abs(z)));
  const double t = seconds_since(start);
  v.require(t < 30.0, fmt::format("runtime {:.2f}s >= 30s", t));
  v.note(fmt::format("{} successes / {} trials, freq={:.4e} analytic={:.4e} z={:+.2f} seed={} {:.2f}s",
                     successes, kTrials, freq, analytic, z, kSeed, t));
  return v;
}

Verdict property_suites() {
  Verdict v;
  const auto start = Clock::now();
  std::uint64_t seed = 0xacce97a2ce;
  for (const auto& entry : acceptance_properties()) {
    const auto out = run_property(entry, seed++, kMinPropertyCases);
    v.require(out.passed(), fmt::format("{}: {} of {} cases failed ({})", out.name, out.failures,
                                        out.cases, out.first_failure));
    v.note(fmt::format("{} [{} cases, {:.2f}s]", out.name, out.cases, out.seconds));
  }
  const double t = seconds_since(start);
  v.require(t < 60.0, fmt::format("runtime {:.2f}s >= 60s", t));
  v.note(fmt::format("total {:.2f}s", t));
  return v;
}

Verdict cross_chain_coupling() {
  Verdict v;
  // Chain "a" is the PNS chain. Chain "b" is a single easy step; raising its
  // multiplier to 2 lifts L_max from 37.5 to 50.
  Portfolio portfolio = pns_portfolio();
  auto b = build_chain("b", "Tap and read", {{"tap-fibre-cable", KillChainPhase::Entering, 5, 5, 1.0, {}}},
                       Impact{3, ""});
  portfolio.chains.emplace(b.id, b);

  WhatIfOverride o;
  o.steps.push_back({"b", 0, std::nullopt, std::nullopt, 2.0});
  const auto diff = what_if(portfolio, pns_catalog(), config_for(AggregationMethod::Maximum), o);

  const auto* a_before = diff.baseline.find(kPnsChainId);
  const auto* a_after = diff.modified.find(kPnsChainId);
  v.require(diff.bounds_changed, "bounds did not change");
  v.require(a_before->discrete_likelihood != a_after->discrete_likelihood,
            "untouched chain's L did not move");
  for (const auto& d : diff.deltas) {
    v.require(d.changed(), fmt::format("chain {} not reported changed", d.chain_id));
    v.note(fmt::format("{}: dL {:+d} dR {:+d}", d.chain_id, d.delta_likelihood, d.delta_risk));
  }
  v.note(fmt::format("bounds [{}, {}] -> [{}, {}]", diff.baseline.bounds.lower,
                     diff.baseline.bounds.upper, diff.modified.bounds.lower, diff.modified.bounds.upper));
  return v;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

Verdict cli_goldens() {
  Verdict v;
  int matched = 0;
  const auto cases = golden_cases();
  for (const auto& c : cases) {
    const auto r = run_cli(c.args);
    std::string golden;
    try {
      golden = read_text(golden_path(c.file));
    } catch (const std::exception& e) {
      v.require(false, e.what());
      continue;
    }
    v.require(r.out == golden, fmt::format("{} differs from golden", c.file));
    v.require(r.code == c.exit_code, fmt::format("{} exit {} != {}", c.file, r.code, c.exit_code));
    if (r.out == golden && r.code == c.exit_code) ++matched;
  }
  v.note(fmt::format("{}/{} goldens", matched, cases.size()));

  // Exit-code contract: 0 ok, 1 validation or semantic, 2 usage or IO, 3 flagged.
  const auto catalog = data_path("pns_catalog.json").string();
  const auto portfolio = data_path("pns_portfolio.json").string();
  auto ghost = json::parse_document(read_text(data_path("pns_portfolio.json")));
  ghost["chains"][0]["steps"][0]["technique_id"] = "ghost";
  const auto ghost_path = std::filesystem::temp_directory_path() / "qrisk_acceptance_ghost.json";
  write_text(ghost_path, json::dump(ghost));

  const std::pair<std::vector<std::string>, int> contract[] = {
      {{"validate", catalog, portfolio}, 0},
      {{"assess", catalog, portfolio, "--method", "geom"}, 0},
      {{"validate", catalog, ghost_path.string()}, 1},
      {{"assess", catalog, ghost_path.string()}, 1},
      {{"validate", "/nonexistent.json"}, 2},
      {{"assess", catalog, portfolio, "--global-multiplier", "3"}, 2},
      {{"assess", catalog, portfolio, "--method", "max"}, 3},
  };
  for (const auto& [args, code] : contract) {
    const auto r = run_cli(args);
    v.require(r.code == code, fmt::format("`{}` exited {} (expected {})", fmt::join(args, " "), r.code, code));
  }
  std::filesystem::remove(ghost_path);
  v.note(fmt::format("{} exit-code checks", std::size(contract)));
  return v;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"PNS worked-example reproduction", pns_reproduction},
      {"Bounds reproduction and sensitivity", bounds_reproduction},
      {"Monte-Carlo P_succ oracle", monte_carlo},
      {"Property suites", property_suites},
      {"Cross-chain coupling", cross_chain_coupling},
      {"CLI golden outputs and exit codes", cli_goldens},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.require(false, fmt::format("exception: {}", e.what()));
    }
    failed += v.pass ? 0 : 1;
    fmt::print("{} {}: {}\n", v.pass ? "PASS" : "FAIL", name, fmt::join(v.notes, "; "));
  }
  fmt::print("{} of {} criteria passed\n", std::size(criteria) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
