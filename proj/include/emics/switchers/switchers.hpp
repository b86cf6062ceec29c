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

#ifndef EMICS__SWITCHERS__SWITCHERS_HPP_
#define EMICS__SWITCHERS__SWITCHERS_HPP_

#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "emics/core/types.hpp"
#include "emics/error_signal.hpp"
#include "emics/fuzzy/engine.hpp"

namespace emics
{

struct ThresholdSwitcherConfig
{
  double threshold{0.07};  // m/s

  void validate() const
  {
    if (!(threshold > 0.0)) {
      throw std::invalid_argument("threshold must be > 0");
    }
  }
};

/// Strictly greater: sitting exactly on the threshold does not switch.
inline bool threshold_decide(double e_filtered, const ThresholdSwitcherConfig & cfg)
{
  return e_filtered > cfg.threshold;
}

struct SwitchDecision
{
  bool should_switch{false};
  Initiator initiator{Initiator::Emics};
  std::string reason;
};

enum class SwitcherKind { Fuzzy, Threshold };

inline std::string_view to_string(SwitcherKind k)
{
  return k == SwitcherKind::Fuzzy ? "fuzzy" : "threshold";
}

struct SwitcherConfig
{
  SwitcherKind kind{SwitcherKind::Fuzzy};
  ThresholdSwitcherConfig threshold;
};

/// The robot-side control switcher: fuzzy EMICS or the plain threshold rule.
class LoaSwitcher
{
public:
  explicit LoaSwitcher(SwitcherConfig cfg = {})
  : cfg_(cfg), engine_(fuzzy::emics_engine())
  {
    cfg_.threshold.validate();
  }

  LoaSwitcher(SwitcherConfig cfg, fuzzy::FuzzyEngine engine) : cfg_(cfg), engine_(std::move(engine)) {}

  const SwitcherConfig & config() const { return cfg_; }
  const fuzzy::FuzzyEngine & engine() const { return engine_; }

  SwitchDecision decide(double e_filtered, double s_robot, double now, const ErrorFilter & filter) const
  {
    SwitchDecision d;
    if (filter.in_lockout(now)) {
      return d;
    }
    if (cfg_.kind == SwitcherKind::Threshold) {
      d.should_switch = threshold_decide(e_filtered, cfg_.threshold);
      if (d.should_switch) {
        d.reason = "filtered goal-directed error above threshold";
      }
      return d;
    }
    d.should_switch = engine_.decide(e_filtered, s_robot).switch_loa;
    if (d.should_switch) {
      d.reason = "large goal-directed error while not reversing";
    }
    return d;
  }

private:
  SwitcherConfig cfg_;
  fuzzy::FuzzyEngine engine_;
};

/// Fuzzy EMICS decision with lockout.
inline SwitchDecision emics_decide(
  const LoaSwitcher & switcher, double e_filtered, double s_robot, double now,
  const ErrorFilter & filter)
{
  return switcher.decide(e_filtered, s_robot, now, filter);
}

struct AuthorityPolicy
{
  ControlMode control_mode{ControlMode::PureTeleop};
  bool operator_may_switch{false};
  bool emics_may_switch{false};

  static AuthorityPolicy for_mode(ControlMode m)
  {
    switch (m) {
      case ControlMode::PureTeleop:
      case ControlMode::PureAutonomy: return {m, false, false};
      case ControlMode::HumanInitiative: return {m, true, false};
      case ControlMode::RobotInitiative: return {m, false, true};
      case ControlMode::MixedInitiative: return {m, true, true};
    }
    return {m, false, false};
  }

  bool may_switch(Initiator who) const
  {
    return who == Initiator::Operator ? operator_may_switch : emics_may_switch;
  }
};

struct SwitchResult
{
  LoaMode loa{LoaMode::Teleoperation};
  std::optional<LoaSwitchEvent> event;  // set when granted
  std::string denied_reason;            // set when refused

  bool granted() const { return event.has_value(); }
};

inline std::string denial_reason(ControlMode m, Initiator who)
{
  switch (m) {
    case ControlMode::RobotInitiative: return "RI mode";
    case ControlMode::HumanInitiative: return "HI mode";
    case ControlMode::PureTeleop: return "teleoperation-only mode";
    case ControlMode::PureAutonomy: return "autonomy-only mode";
    case ControlMode::MixedInitiative: break;
  }
  return std::string{to_string(who)} + " may not switch";
}

/// Toggles the LOA if `requester` holds switching authority, resetting the
/// error filter. Every granted switch, from either agent, resets the filter.
inline SwitchResult apply_switch_request(
  LoaMode current, Initiator requester, const AuthorityPolicy & policy, double now,
  ErrorFilter & filter, std::string reason = {})
{
  SwitchResult r;
  r.loa = current;
  if (!policy.may_switch(requester)) {
    r.denied_reason = denial_reason(policy.control_mode, requester);
    return r;
  }
  r.loa = toggled(current);
  r.event = LoaSwitchEvent{now, current, r.loa, requester, std::move(reason)};
  filter.reset_on_switch(now);
  return r;
}

struct Notification
{
  double t{0.0};
  LoaMode new_loa{LoaMode::Teleoperation};
  Initiator initiator{Initiator::Operator};
  std::string reason;
};

inline Notification notify(const LoaSwitchEvent & e)
{
  return {e.t, e.to, e.initiator, e.reason};
}

inline void to_json(nlohmann::json & j, const Notification & n)
{
  j = nlohmann::json{
    {"type", "loaSwitch"},
    {"t", n.t},
    {"loa", to_string(n.new_loa)},
    {"initiator", to_string(n.initiator)},
    {"reason", n.reason}};
}

inline void to_json(nlohmann::json & j, const SwitcherConfig & c)
{
  j = nlohmann::json{{"kind", to_string(c.kind)}, {"threshold", c.threshold.threshold}};
}

inline void from_json(const nlohmann::json & j, SwitcherConfig & c)
{
  const std::string kind = j.value("kind", std::string{"fuzzy"});
  if (kind == "fuzzy") {
    c.kind = SwitcherKind::Fuzzy;
  } else if (kind == "threshold") {
    c.kind = SwitcherKind::Threshold;
  } else {
    throw std::invalid_argument("unknown switcher kind: " + kind);
  }
  c.threshold.threshold = j.value("threshold", 0.07);
  c.threshold.validate();
}

}  // namespace emics

#endif  // EMICS__SWITCHERS__SWITCHERS_HPP_
