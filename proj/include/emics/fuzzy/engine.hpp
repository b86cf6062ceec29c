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

#ifndef EMICS__FUZZY__ENGINE_HPP_
#define EMICS__FUZZY__ENGINE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/fuzzy/membership.hpp"
#include "emics/fuzzy/rule.hpp"

namespace emics::fuzzy
{

struct LinguisticVariable
{
  std::string name;
  double lo{0.0};
  double hi{1.0};
  std::map<std::string, MembershipFunction> terms;

  void validate() const
  {
    if (!(lo < hi)) {
      throw std::invalid_argument("variable '" + name + "': empty universe");
    }
    if (terms.empty()) {
      throw std::invalid_argument("variable '" + name + "': no terms");
    }
    for (const auto & [term, mf] : terms) {
      // Shoulders may sit on the universe bounds; nothing may stick out.
      if (mf.support_lo() < lo || mf.support_hi() > hi) {
        throw std::invalid_argument(
          "variable '" + name + "': term '" + term + "' extends outside the universe");
      }
    }
  }

  double clamp(double x) const { return std::clamp(x, lo, hi); }
};

/// Operators are fixed: AND = min, OR = max, NOT = 1 - mu, implication = min,
/// aggregation = max, defuzzification = largest of maxima.
struct InferenceConfig
{
  static constexpr const char * conjunction = "min";
  static constexpr const char * disjunction = "max";
  static constexpr const char * implication = "min";
  static constexpr const char * aggregation = "max";
  static constexpr const char * defuzzifier = "LOM";
};

struct FuzzyDecision
{
  double y{-1.0};
  bool switch_loa{false};
};

using Activations = std::map<std::string, double>;

inline std::map<std::string, double> fuzzify(const LinguisticVariable & var, double x)
{
  const double v = var.clamp(x);
  std::map<std::string, double> out;
  for (const auto & [term, mf] : var.terms) {
    out.emplace(term, mf(v));
  }
  return out;
}

/// Each rule fires at its antecedent degree; per output term the strongest
/// rule wins. Every output term appears in the result.
inline Activations fire_rules(
  const std::vector<FuzzyRule> & rules, const FuzzyInputs & inputs,
  const LinguisticVariable & output)
{
  Activations act;
  for (const auto & [term, mf] : output.terms) {
    (void)mf;
    act.emplace(term, 0.0);
  }
  for (const auto & rule : rules) {
    const double w = rule.antecedent.evaluate(inputs);
    auto & slot = act.at(rule.consequent);
    slot = std::max(slot, w);
  }
  return act;
}

/// Largest of maxima over the max-aggregate of the min-clipped output sets.
/// Returns `fallback` when no rule fired.
inline double defuzzify_lom(
  const Activations & activations, const LinguisticVariable & output, double fallback)
{
  double peak = 0.0;
  for (const auto & [term, h] : activations) {
    (void)term;
    peak = std::max(peak, h);
  }
  if (!(peak > 0.0)) {
    return fallback;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto & [term, h] : activations) {
    if (h != peak) {
      continue;
    }
    // Clipped at h, the set equals h exactly on its alpha-cut at h.
    const double level = std::min(h, 1.0);
    best = std::max(best, output.terms.at(term).alpha_cut_right(level));
  }
  return std::clamp(best, output.lo, output.hi);
}

/// Two-input Mamdani engine with a bang-bang output: y > 0 means "switch".
class FuzzyEngine
{
public:
  FuzzyEngine(
    std::vector<LinguisticVariable> inputs, LinguisticVariable output,
    std::vector<FuzzyRule> rules, double no_fire_output = -1.0)
  : output_(std::move(output)), rules_(std::move(rules)), no_fire_output_(no_fire_output)
  {
    for (auto & v : inputs) {
      v.validate();
      const std::string name = v.name;
      if (!inputs_.emplace(name, std::move(v)).second) {
        throw std::invalid_argument("duplicate input variable '" + name + "'");
      }
    }
    output_.validate();
    if (rules_.empty()) {
      throw std::invalid_argument("fuzzy engine: empty rule base");
    }
    for (const auto & rule : rules_) {
      if (!output_.terms.contains(rule.consequent)) {
        throw std::invalid_argument(
          "rule \"" + rule.text + "\": unknown output term '" + rule.consequent + "'");
      }
      rule.antecedent.for_each_atom([&](const std::string & var, const std::string & term) {
        const auto it = inputs_.find(var);
        if (it == inputs_.end()) {
          throw std::invalid_argument("rule \"" + rule.text + "\": unknown variable '" + var + "'");
        }
        if (!it->second.terms.contains(term)) {
          throw std::invalid_argument(
            "rule \"" + rule.text + "\": unknown term '" + term + "' of '" + var + "'");
        }
      });
    }
  }

  const std::map<std::string, LinguisticVariable> & inputs() const { return inputs_; }
  const LinguisticVariable & input(const std::string & name) const { return inputs_.at(name); }
  const LinguisticVariable & output() const { return output_; }
  const std::vector<FuzzyRule> & rules() const { return rules_; }

  FuzzyInputs fuzzify_all(const std::map<std::string, double> & crisp) const
  {
    FuzzyInputs out;
    for (const auto & [name, var] : inputs_) {
      const auto it = crisp.find(name);
      if (it == crisp.end()) {
        throw std::invalid_argument("missing crisp input '" + name + "'");
      }
      out.emplace(name, fuzzify(var, it->second));
    }
    return out;
  }

  Activations activations(const std::map<std::string, double> & crisp) const
  {
    return fire_rules(rules_, fuzzify_all(crisp), output_);
  }

  double infer(const std::map<std::string, double> & crisp) const
  {
    return defuzzify_lom(activations(crisp), output_, no_fire_output_);
  }

  /// EMICS form: inputs named "error" and "speed".
  FuzzyDecision decide(double error, double speed) const
  {
    const double y = infer({{"error", error}, {"speed", speed}});
    return {y, y > 0.0};
  }

private:
  std::map<std::string, LinguisticVariable> inputs_;
  LinguisticVariable output_;
  std::vector<FuzzyRule> rules_;
  double no_fire_output_;
};

inline FuzzyDecision decide(const FuzzyEngine & engine, double error, double speed)
{
  return engine.decide(error, speed);
}

// JSON definition:
// {"inputs": [{"name", "range": [lo, hi], "terms": {name: mf}}],
//  "output": {...same...}, "rules": ["IF ... THEN term", ...], "noFireOutput": -1}
inline LinguisticVariable variable_from_json(const nlohmann::json & j)
{
  LinguisticVariable v;
  v.name = j.at("name").get<std::string>();
  const auto range = j.at("range").get<std::vector<double>>();
  if (range.size() != 2) {
    throw std::invalid_argument("variable range must be [lo, hi]");
  }
  v.lo = range[0];
  v.hi = range[1];
  for (const auto & [term, mf] : j.at("terms").items()) {
    v.terms.emplace(term, membership_from_json(mf));
  }
  return v;
}

inline nlohmann::json variable_to_json(const LinguisticVariable & v)
{
  nlohmann::json terms = nlohmann::json::object();
  for (const auto & [term, mf] : v.terms) {
    terms[term] = mf;
  }
  return {{"name", v.name}, {"range", {v.lo, v.hi}}, {"terms", terms}};
}

inline FuzzyEngine engine_from_json(const nlohmann::json & j)
{
  std::vector<LinguisticVariable> inputs;
  for (const auto & v : j.at("inputs")) {
    inputs.push_back(variable_from_json(v));
  }
  std::vector<FuzzyRule> rules;
  for (const auto & r : j.at("rules")) {
    rules.push_back(parse_rule(r.get<std::string>()));
  }
  return FuzzyEngine(
    std::move(inputs), variable_from_json(j.at("output")), std::move(rules),
    j.value("noFireOutput", -1.0));
}

inline nlohmann::json engine_to_json(const FuzzyEngine & e)
{
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto & [name, v] : e.inputs()) {
    (void)name;
    inputs.push_back(variable_to_json(v));
  }
  nlohmann::json rules = nlohmann::json::array();
  for (const auto & r : e.rules()) {
    rules.push_back(r.text);
  }
  return {{"inputs", inputs}, {"output", variable_to_json(e.output())}, {"rules", rules}};
}

/// The EMICS rule base and membership functions.
inline nlohmann::json emics_definition()
{
  return nlohmann::json::parse(R"({
    "inputs": [
      {"name": "error", "range": [0.0, 0.1], "terms": {
        "small":  {"trapezoid": [0.0, 0.0, 0.035, 0.06]},
        "medium": {"trapezoid": [0.045, 0.055, 0.065, 0.08]},
        "large":  {"trapezoid": [0.065, 0.085, 0.1, 0.1]}}},
      {"name": "speed", "range": [-0.4, 0.4], "terms": {
        "reverse": {"trapezoid": [-0.4, -0.4, -0.03, -0.02]},
        "zero":    {"triangle": [-0.03, 0.0, 0.03]},
        "forward": {"trapezoid": [0.02, 0.03, 0.4, 0.4]}}}
    ],
    "output": {"name": "loa", "range": [-1.0, 1.0], "terms": {
      "no-change": {"triangle": [-1.0, -1.0, 0.0]},
      "change":    {"triangle": [0.0, 1.0, 1.0]}}},
    "rules": [
      "IF error IS small OR error IS medium THEN loa IS no-change",
      "IF error IS large AND NOT speed IS reverse THEN loa IS change",
      "IF speed IS reverse AND error IS large THEN loa IS no-change"
    ],
    "noFireOutput": -1.0
  })");
}

inline FuzzyEngine emics_engine()
{
  return engine_from_json(emics_definition());
}

}  // namespace emics::fuzzy

#endif  // EMICS__FUZZY__ENGINE_HPP_
