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

#ifndef EMICS__ERROR_SIGNAL_HPP_
#define EMICS__ERROR_SIGNAL_HPP_

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "emics/core/types.hpp"

namespace emics
{

struct ErrorFilterConfig
{
  double alpha{0.06};
  double e_max{kMaxRawError};
  double lockout_seconds{2.0};

  void validate() const
  {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw std::invalid_argument("error filter: alpha must be in (0, 1]");
    }
    if (!(e_max > 0.0) || lockout_seconds < 0.0) {
      throw std::invalid_argument("error filter: bad eMax or lockout");
    }
  }
};

/// Goal-directed motion error: how far the robot's speed falls short of the
/// expert's, clamped to [0, e_max]. Running faster than the expert is not an error.
inline double raw_error(double s_expert, double s_robot, double e_max = kMaxRawError)
{
  return std::clamp(s_expert - s_robot, 0.0, e_max);
}

struct ErrorFilterState
{
  double e_raw{0.0};
  double e_filtered{0.0};
  double suppressed_until{-std::numeric_limits<double>::infinity()};
};

/// Exponential moving average of the raw error with a post-switch lockout.
/// Starts from E = 0.
class ErrorFilter
{
public:
  explicit ErrorFilter(ErrorFilterConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  const ErrorFilterConfig & config() const { return cfg_; }
  const ErrorFilterState & state() const { return state_; }
  double filtered() const { return state_.e_filtered; }

  bool in_lockout(double now) const { return now < state_.suppressed_until - kTimeEps; }

  /// E_t = alpha * e_t + (1 - alpha) * E_{t-1}; held at zero during lockout.
  double update(double e_raw, double now)
  {
    state_.e_raw = std::clamp(e_raw, 0.0, cfg_.e_max);
    if (in_lockout(now)) {
      state_.e_filtered = 0.0;
    } else {
      state_.e_filtered = cfg_.alpha * state_.e_raw + (1.0 - cfg_.alpha) * state_.e_filtered;
    }
    return state_.e_filtered;
  }

  void reset_on_switch(double now)
  {
    state_.e_filtered = 0.0;
    state_.suppressed_until = now + cfg_.lockout_seconds;
  }

private:
  // Tick times are k * dt; keeps t = 12.0 from reading as 11.999... < 12.
  static constexpr double kTimeEps = 1e-9;

  ErrorFilterConfig cfg_;
  ErrorFilterState state_;
};

inline void to_json(nlohmann::json & j, const ErrorFilterConfig & c)
{
  j = nlohmann::json{{"alpha", c.alpha}, {"eMax", c.e_max}, {"lockoutSeconds", c.lockout_seconds}};
}

inline void from_json(const nlohmann::json & j, ErrorFilterConfig & c)
{
  ErrorFilterConfig d;
  c.alpha = j.value("alpha", d.alpha);
  c.e_max = j.value("eMax", d.e_max);
  c.lockout_seconds = j.value("lockoutSeconds", d.lockout_seconds);
  c.validate();
}

}  // namespace emics

#endif  // EMICS__ERROR_SIGNAL_HPP_
