// Copyright (c) 2026 The emics authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "emics/fuzzy/engine.hpp"
#include "oracles/fuzzy_oracle.hpp"

using namespace emics::fuzzy;

namespace
{

const FuzzyEngine & engine()
{
  static const FuzzyEngine e = emics_engine();
  return e;
}

double mu(const char * var, const char * term, double x)
{
  return evaluate_membership(engine().input(var).terms.at(term), x);
}

}  // namespace

TEST(Membership, TableExamples)
{
  EXPECT_EQ(mu("error", "small", 0.02), 1.0);
  EXPECT_NEAR(mu("error", "medium", 0.07), (0.08 - 0.07) / (0.08 - 0.065), 1e-15);
  EXPECT_NEAR(mu("error", "medium", 0.07), 0.6667, 1e-4);
  EXPECT_NEAR(mu("error", "large", 0.07), 0.25, 1e-12);
}

TEST(Membership, ExactAtBreakpoints)
{
  EXPECT_EQ(mu("error", "small", 0.0), 1.0);
  EXPECT_EQ(mu("error", "small", 0.035), 1.0);
  EXPECT_EQ(mu("error", "small", 0.06), 0.0);
  EXPECT_EQ(mu("error", "medium", 0.045), 0.0);
  EXPECT_EQ(mu("error", "medium", 0.055), 1.0);
  EXPECT_EQ(mu("error", "medium", 0.065), 1.0);
  EXPECT_EQ(mu("error", "medium", 0.08), 0.0);
  EXPECT_EQ(mu("error", "large", 0.065), 0.0);
  EXPECT_EQ(mu("error", "large", 0.085), 1.0);
  EXPECT_EQ(mu("error", "large", 0.1), 1.0);
  EXPECT_EQ(mu("speed", "reverse", -0.4), 1.0);
  EXPECT_EQ(mu("speed", "reverse", -0.03), 1.0);
  EXPECT_EQ(mu("speed", "reverse", -0.02), 0.0);
  EXPECT_EQ(mu("speed", "zero", 0.0), 1.0);
  EXPECT_EQ(mu("speed", "zero", -0.03), 0.0);
  EXPECT_EQ(mu("speed", "zero", 0.03), 0.0);
  EXPECT_EQ(mu("speed", "forward", 0.02), 0.0);
  EXPECT_EQ(mu("speed", "forward", 0.03), 1.0);
  EXPECT_EQ(mu("speed", "forward", 0.4), 1.0);
}

TEST(Membership, BoundedAndContinuousProperty)
{
  for (const auto & [vname, var] : engine().inputs()) {
    for (const auto & [tname, mf] : var.terms) {
      double prev = mf(var.lo);
      const int n = 20000;
      for (int i = 0; i <= n; ++i) {
        const double x = var.lo + (var.hi - var.lo) * i / n;
        const double v = mf(x);
        ASSERT_GE(v, 0.0) << vname << "/" << tname;
        ASSERT_LE(v, 1.0) << vname << "/" << tname;
        // steepest slope in the tables is 1 / 0.01
        ASSERT_LE(std::abs(v - prev), 100.0 * (var.hi - var.lo) / n + 1e-12) << vname << "/" << tname;
        prev = v;
      }
    }
  }
}

TEST(Membership, RejectsMalformed)
{
  EXPECT_THROW(MembershipFunction::trapezoid(0.2, 0.1, 0.3, 0.4), std::invalid_argument);
  EXPECT_THROW(MembershipFunction::triangle(0.0, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(MembershipFunction::trapezoid(0.0, NAN, 0.3, 0.4), std::invalid_argument);
}

TEST(Fuzzify, Examples)
{
  const auto e = fuzzify(engine().input("error"), 0.09);
  EXPECT_EQ(e.at("small"), 0.0);
  EXPECT_EQ(e.at("medium"), 0.0);
  EXPECT_EQ(e.at("large"), 1.0);
  const auto s = fuzzify(engine().input("speed"), -0.3);
  EXPECT_EQ(s.at("reverse"), 1.0);
  EXPECT_EQ(s.at("zero"), 0.0);
  EXPECT_EQ(s.at("forward"), 0.0);
  const auto z = fuzzify(engine().input("speed"), 0.0);
  EXPECT_EQ(z.at("reverse"), 0.0);
  EXPECT_EQ(z.at("zero"), 1.0);
  EXPECT_EQ(z.at("forward"), 0.0);
}

TEST(Fuzzify, ClampsToUniverse)
{
  const auto e = fuzzify(engine().input("error"), 0.5);
  EXPECT_EQ(e.at("large"), 1.0);
  const auto n = fuzzify(engine().input("error"), -0.2);
  EXPECT_EQ(n.at("small"), 1.0);
}

TEST(FireRules, Examples)
{
  auto a = engine().activations({{"error", 0.09}, {"speed", 0.2}});
  EXPECT_EQ(a.at("change"), 1.0);
  EXPECT_EQ(a.at("no-change"), 0.0);
  a = engine().activations({{"error", 0.09}, {"speed", -0.3}});
  EXPECT_EQ(a.at("change"), 0.0);
  EXPECT_EQ(a.at("no-change"), 1.0);
  a = engine().activations({{"error", 0.02}, {"speed", 0.1}});
  EXPECT_EQ(a.at("change"), 0.0);
  EXPECT_EQ(a.at("no-change"), 1.0);
}

TEST(DefuzzifyLom, Examples)
{
  const auto & out = engine().output();
  EXPECT_EQ(defuzzify_lom({{"change", 1.0}, {"no-change", 0.0}}, out, -1.0), 1.0);
  EXPECT_EQ(defuzzify_lom({{"change", 0.0}, {"no-change", 1.0}}, out, -1.0), -1.0);
  const double y = defuzzify_lom({{"change", 0.25}, {"no-change", 2.0 / 3.0}}, out, -1.0);
  EXPECT_LT(y, 0.0);
  EXPECT_NEAR(y, -2.0 / 3.0, 1e-12);
}

TEST(DefuzzifyLom, NoRuleFiredGivesNoChange)
{
  EXPECT_EQ(defuzzify_lom({{"change", 0.0}, {"no-change", 0.0}}, engine().output(), -1.0), -1.0);
}

TEST(DefuzzifyLom, TieGoesToLargestValue)
{
  EXPECT_EQ(defuzzify_lom({{"change", 0.5}, {"no-change", 0.5}}, engine().output(), -1.0), 1.0);
}

// Brute-force LOM on a dense sampling of the aggregate, as a check on the
// analytic alpha-cut shortcut.
TEST(DefuzzifyLom, MatchesSampledAggregateProperty)
{
  const auto & out = engine().output();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 200000;
  for (int trial = 0; trial < 200; ++trial) {
    const double hc = u(rng);
    const double hn = u(rng);
    double best_v = -1.0;
    double best_y = -1.0;
    for (int i = 0; i <= n; ++i) {
      const double y = -1.0 + 2.0 * i / n;
      const double v = std::max(
        std::min(hc, out.terms.at("change")(y)), std::min(hn, out.terms.at("no-change")(y)));
      if (v >= best_v - 1e-12) {
        if (v > best_v + 1e-12) {
          best_v = v;
        }
        best_y = y;
      }
    }
    EXPECT_NEAR(defuzzify_lom({{"change", hc}, {"no-change", hn}}, out, -1.0), best_y, 2e-5);
  }
}

TEST(Decide, Examples)
{
  EXPECT_TRUE(decide(engine(), 0.09, 0.2).switch_loa);
  EXPECT_FALSE(decide(engine(), 0.02, 0.1).switch_loa);
  EXPECT_FALSE(decide(engine(), 0.09, -0.3).switch_loa);
  EXPECT_FALSE(decide(engine(), 0.07, 0.3).switch_loa);
}

TEST(Decide, SwitchIffPositiveOutput)
{
  for (double e = 0.0; e <= 0.1; e += 0.0025) {
    for (double s = -0.4; s <= 0.4; s += 0.01) {
      const auto d = decide(engine(), e, s);
      ASSERT_EQ(d.switch_loa, d.y > 0.0);
      ASSERT_GE(d.y, -1.0);
      ASSERT_LE(d.y, 1.0);
    }
  }
}

TEST(Decide, ZeroErrorNeverSwitches)
{
  for (int i = 0; i <= 80; ++i) {
    ASSERT_FALSE(decide(engine(), 0.0, -0.4 + 0.01 * i).switch_loa);
  }
}

TEST(Decide, ReversingExemptionProperty)
{
  for (int i = 0; i <= 100; ++i) {
    const double e = 0.001 * i;
    for (int k = 0; k <= 37; ++k) {
      ASSERT_FALSE(decide(engine(), e, -0.4 + 0.01 * k).switch_loa) << e;
    }
  }
}

TEST(Decide, PureFunction)
{
  const auto a = decide(engine(), 0.0735, 0.2);
  const auto b = decide(engine(), 0.0735, 0.2);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.switch_loa, b.switch_loa);
}

TEST(Decide, MatchesOracleOnDenseGrid)
{
  for (int i = 0; i <= 1000; ++i) {
    for (int k = 0; k <= 800; k += 3) {
      const double e = 0.0001 * i;
      const double s = -0.4 + 0.001 * k;
      ASSERT_EQ(decide(engine(), e, s).switch_loa, oracle::should_switch(e, s)) << e << " " << s;
    }
  }
}

TEST(RuleParser, ParsesPrecedenceAndNegation)
{
  const auto r = parse_rule("if error is large and not speed is reverse or error is small then change");
  EXPECT_EQ(r.consequent, "change");
  EXPECT_EQ(r.antecedent.to_string(), "((error IS large AND NOT (speed IS reverse)) OR error IS small)");
  const auto r2 = parse_rule("IF speed IS NOT reverse THEN loa IS no-change");
  EXPECT_EQ(r2.consequent, "no-change");
  EXPECT_EQ(r2.antecedent.to_string(), "NOT (speed IS reverse)");
  const auto r3 = parse_rule("IF (error IS small OR error IS medium) AND speed IS zero THEN x");
  EXPECT_EQ(r3.antecedent.to_string(), "((error IS small OR error IS medium) AND speed IS zero)");
}

TEST(RuleParser, RejectsMalformed)
{
  EXPECT_THROW(parse_rule("error IS large THEN change"), RuleParseError);
  EXPECT_THROW(parse_rule("IF error large THEN change"), RuleParseError);
  EXPECT_THROW(parse_rule("IF (error IS large THEN change"), RuleParseError);
  EXPECT_THROW(parse_rule("IF error IS large THEN"), RuleParseError);
  EXPECT_THROW(parse_rule("IF error IS large THEN change now"), RuleParseError);
}

TEST(EngineJson, UnknownReferencesRejectedAtConstruction)
{
  auto def = emics_definition();
  def["rules"].push_back("IF error IS huge THEN change");
  EXPECT_THROW(engine_from_json(def), std::invalid_argument);
  def = emics_definition();
  def["rules"].push_back("IF torque IS large THEN change");
  EXPECT_THROW(engine_from_json(def), std::invalid_argument);
  def = emics_definition();
  def["rules"].push_back("IF error IS large THEN panic");
  EXPECT_THROW(engine_from_json(def), std::invalid_argument);
}

TEST(EngineJson, TermOutsideUniverseRejected)
{
  auto def = emics_definition();
  def["inputs"][0]["terms"]["large"] = {{"trapezoid", {0.065, 0.085, 0.1, 0.2}}};
  EXPECT_THROW(engine_from_json(def), std::invalid_argument);
}

TEST(EngineJson, DefinitionRoundTrip)
{
  const auto again = engine_from_json(engine_to_json(engine()));
  for (int i = 0; i <= 100; ++i) {
    for (int k = 0; k <= 80; ++k) {
      const double e = 0.001 * i;
      const double s = -0.4 + 0.01 * k;
      ASSERT_EQ(again.decide(e, s).y, engine().decide(e, s).y);
    }
  }
}

TEST(EngineJson, AlternateRuleBaseLoads)
{
  // Threshold-like rule base without the reversing exemption.
  auto def = emics_definition();
  def["rules"] = {"IF error IS small OR error IS medium THEN no-change", "IF error IS large THEN change"};
  const auto alt = engine_from_json(def);
  EXPECT_TRUE(alt.decide(0.09, -0.3).switch_loa);
  EXPECT_FALSE(engine().decide(0.09, -0.3).switch_loa);
}
