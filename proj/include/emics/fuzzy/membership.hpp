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

#ifndef EMICS__FUZZY__MEMBERSHIP_HPP_
#define EMICS__FUZZY__MEMBERSHIP_HPP_

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace emics::fuzzy
{

/// Piecewise-linear membership function: trapezoid (a, b, c, d) or triangle
/// (a, b, c), stored uniformly as a trapezoid with b == c for triangles.
/// Degenerate edges (a == b or c == d) form shoulders.
class MembershipFunction
{
public:
  enum class Kind { Trapezoid, Triangle };

  static MembershipFunction trapezoid(double a, double b, double c, double d)
  {
    return MembershipFunction(Kind::Trapezoid, a, b, c, d);
  }

  static MembershipFunction triangle(double a, double b, double c)
  {
    return MembershipFunction(Kind::Triangle, a, b, b, c);
  }

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double support_lo() const { return a_; }
  double support_hi() const { return d_; }

  double operator()(double x) const
  {
    if (x >= b_ && x <= c_) {
      return 1.0;
    }
    if (x <= a_ || x >= d_) {
      return 0.0;
    }
    if (x < b_) {
      return (x - a_) / (b_ - a_);
    }
    return (d_ - x) / (d_ - c_);
  }

  /// Largest x with mu(x) >= level, for level in (0, 1].
  double alpha_cut_right(double level) const
  {
    if (d_ == c_) {
      return c_;
    }
    return d_ - level * (d_ - c_);
  }

  bool operator==(const MembershipFunction &) const = default;

private:
  MembershipFunction(Kind kind, double a, double b, double c, double d)
  : kind_(kind), a_(a), b_(b), c_(c), d_(d)
  {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d))) {
      throw std::invalid_argument("membership function: non-finite breakpoint");
    }
    if (!(a <= b && b <= c && c <= d)) {
      throw std::invalid_argument("membership function: breakpoints must be non-decreasing");
    }
  }

  Kind kind_;
  double a_;
  double b_;
  double c_;
  double d_;
};

inline double evaluate_membership(const MembershipFunction & mf, double x)
{
  return mf(x);
}

// {"trapezoid": [a, b, c, d]} or {"triangle": [a, b, c]}
inline void to_json(nlohmann::json & j, const MembershipFunction & mf)
{
  if (mf.kind() == MembershipFunction::Kind::Triangle) {
    j = nlohmann::json{{"triangle", {mf.a(), mf.b(), mf.d()}}};
  } else {
    j = nlohmann::json{{"trapezoid", {mf.a(), mf.b(), mf.c(), mf.d()}}};
  }
}

inline MembershipFunction membership_from_json(const nlohmann::json & j)
{
  if (j.contains("trapezoid")) {
    const auto p = j.at("trapezoid").get<std::vector<double>>();
    if (p.size() != 4) {
      throw std::invalid_argument("trapezoid needs 4 breakpoints");
    }
    return MembershipFunction::trapezoid(p[0], p[1], p[2], p[3]);
  }
  if (j.contains("triangle")) {
    const auto p = j.at("triangle").get<std::vector<double>>();
    if (p.size() != 3) {
      throw std::invalid_argument("triangle needs 3 breakpoints");
    }
    return MembershipFunction::triangle(p[0], p[1], p[2]);
  }
  throw std::invalid_argument("membership function must be a trapezoid or triangle");
}

}  // namespace emics::fuzzy

#endif  // EMICS__FUZZY__MEMBERSHIP_HPP_
