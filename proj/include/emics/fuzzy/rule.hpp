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

#ifndef EMICS__FUZZY__RULE_HPP_
#define EMICS__FUZZY__RULE_HPP_

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emics::fuzzy
{

/// Degrees of membership per variable, per term.
using FuzzyInputs = std::map<std::string, std::map<std::string, double>>;

class RuleParseError : public std::invalid_argument
{
public:
  explicit RuleParseError(const std::string & what) : std::invalid_argument(what) {}
};

/// Antecedent expression tree. Immutable and cheap to copy.
class Expression
{
public:
  enum class Op { Atom, Not, And, Or };

  static Expression atom(std::string variable, std::string term)
  {
    Node n{Op::Atom, std::move(variable), std::move(term), nullptr, nullptr};
    return Expression(std::move(n));
  }
  static Expression negate(Expression e) { return Expression(Node{Op::Not, {}, {}, e.node_, nullptr}); }
  static Expression conj(Expression l, Expression r) { return Expression(Node{Op::And, {}, {}, l.node_, r.node_}); }
  static Expression disj(Expression l, Expression r) { return Expression(Node{Op::Or, {}, {}, l.node_, r.node_}); }

  Op op() const { return node_->op; }

  /// NOT = 1 - mu, AND = min, OR = max.
  double evaluate(const FuzzyInputs & inputs) const { return eval(*node_, inputs); }

  /// Calls f(variable, term) for every atom.
  template <typename F>
  void for_each_atom(F && f) const
  {
    visit_atoms(*node_, f);
  }

  std::string to_string() const { return render(*node_); }

private:
  struct Node
  {
    Op op;
    std::string variable;
    std::string term;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Expression(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static double eval(const Node & n, const FuzzyInputs & inputs)
  {
    switch (n.op) {
      case Op::Atom: {
        const auto var = inputs.find(n.variable);
        if (var == inputs.end()) {
          throw std::out_of_range("rule references missing input '" + n.variable + "'");
        }
        const auto term = var->second.find(n.term);
        if (term == var->second.end()) {
          throw std::out_of_range("rule references missing term '" + n.term + "'");
        }
        return term->second;
      }
      case Op::Not: return 1.0 - eval(*n.lhs, inputs);
      case Op::And: return std::min(eval(*n.lhs, inputs), eval(*n.rhs, inputs));
      case Op::Or: return std::max(eval(*n.lhs, inputs), eval(*n.rhs, inputs));
    }
    return 0.0;
  }

  template <typename F>
  static void visit_atoms(const Node & n, F & f)
  {
    if (n.op == Op::Atom) {
      f(n.variable, n.term);
      return;
    }
    visit_atoms(*n.lhs, f);
    if (n.rhs) {
      visit_atoms(*n.rhs, f);
    }
  }

  static std::string render(const Node & n)
  {
    switch (n.op) {
      case Op::Atom: return n.variable + " IS " + n.term;
      case Op::Not: return "NOT (" + render(*n.lhs) + ")";
      case Op::And: return "(" + render(*n.lhs) + " AND " + render(*n.rhs) + ")";
      case Op::Or: return "(" + render(*n.lhs) + " OR " + render(*n.rhs) + ")";
    }
    return {};
  }

  std::shared_ptr<const Node> node_;
};

struct FuzzyRule
{
  Expression antecedent;
  std::string consequent;  // output term name
  std::string text;        // source form, kept for reporting
};

namespace detail
{

inline std::vector<std::string> tokenize(std::string_view s)
{
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      out.emplace_back(1, c);
      ++i;
    } else {
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
             s[j] != ')')
      {
        ++j;
      }
      out.emplace_back(s.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

inline std::string upper(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return s;
}

class RuleParser
{
public:
  explicit RuleParser(std::string_view text) : tokens_(tokenize(text)), text_(text) {}

  FuzzyRule parse()
  {
    expect_keyword("IF");
    Expression antecedent = parse_or();
    expect_keyword("THEN");
    std::string first = identifier();
    std::string consequent = first;
    if (peek_keyword("IS")) {
      ++pos_;
      consequent = identifier();
    }
    if (pos_ != tokens_.size()) {
      fail("trailing tokens after consequent");
    }
    return {std::move(antecedent), std::move(consequent), std::string{text_}};
  }

private:
  Expression parse_or()
  {
    Expression e = parse_and();
    while (peek_keyword("OR")) {
      ++pos_;
      e = Expression::disj(std::move(e), parse_and());
    }
    return e;
  }

  Expression parse_and()
  {
    Expression e = parse_factor();
    while (peek_keyword("AND")) {
      ++pos_;
      e = Expression::conj(std::move(e), parse_factor());
    }
    return e;
  }

  Expression parse_factor()
  {
    if (peek_keyword("NOT")) {
      ++pos_;
      return Expression::negate(parse_factor());
    }
    if (peek("(")) {
      ++pos_;
      Expression e = parse_or();
      if (!peek(")")) {
        fail("expected ')'");
      }
      ++pos_;
      return e;
    }
    std::string variable = identifier();
    expect_keyword("IS");
    bool negated = false;
    if (peek_keyword("NOT")) {
      ++pos_;
      negated = true;
    }
    Expression a = Expression::atom(std::move(variable), identifier());
    return negated ? Expression::negate(std::move(a)) : a;
  }

  std::string identifier()
  {
    if (pos_ >= tokens_.size()) {
      fail("unexpected end of rule");
    }
    const std::string & t = tokens_[pos_];
    static const char * reserved[] = {"IF", "THEN", "IS", "AND", "OR", "NOT"};
    for (const char * r : reserved) {
      if (upper(t) == r) {
        fail("expected identifier, got keyword '" + t + "'");
      }
    }
    if (t == "(" || t == ")") {
      fail("expected identifier, got '" + t + "'");
    }
    ++pos_;
    return t;
  }

  bool peek(std::string_view t) const { return pos_ < tokens_.size() && tokens_[pos_] == t; }

  bool peek_keyword(std::string_view k) const
  {
    return pos_ < tokens_.size() && upper(tokens_[pos_]) == k;
  }

  void expect_keyword(std::string_view k)
  {
    if (!peek_keyword(k)) {
      fail("expected '" + std::string{k} + "'");
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string & msg) const
  {
    throw RuleParseError("rule \"" + std::string{text_} + "\": " + msg + " at token " +
                         std::to_string(pos_));
  }

  std::vector<std::string> tokens_;
  std::string_view text_;
  std::size_t pos_{0};
};

}  // namespace detail

/// Parses "IF <expr> THEN <term>" (or "THEN <output> IS <term>"). Keywords are
/// case-insensitive; precedence is NOT > AND > OR.
inline FuzzyRule parse_rule(std::string_view text)
{
  return detail::RuleParser(text).parse();
}

}  // namespace emics::fuzzy

#endif  // EMICS__FUZZY__RULE_HPP_
