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

#ifndef EMICS__OPERATOR__MODELS_HPP_
#define EMICS__OPERATOR__MODELS_HPP_

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/grid.hpp"
#include "emics/core/run_log.hpp"
#include "emics/core/scenario.hpp"
#include "emics/core/types.hpp"
#include "emics/operator/profile.hpp"
#include "emics/planner/expert.hpp"
#include "emics/sim/path_follower.hpp"
#include "emics/sim/simulation.hpp"
#include "emics/switchers/switchers.hpp"

namespace emics::operators
{

struct TeleopConfig
{
  double inflation_radius{0.3};  // m
  sim::FollowerConfig follower;
  double replan_distance{0.5};    // m off the operator's own path
  double waypoint_tolerance{0.3};  // m, for exploration points
  double backoff_time{0.5};        // s reversing after a bump
  double backoff_speed{0.1};       // m/s
};

inline std::mt19937_64 make_rng(std::uint64_t profile_seed, std::uint64_t run_seed, std::uint64_t stream)
{
  std::seed_seq seq{
    static_cast<std::uint32_t>(profile_seed), static_cast<std::uint32_t>(profile_seed >> 32),
    static_cast<std::uint32_t>(run_seed), static_cast<std::uint32_t>(run_seed >> 32),
    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

/// Scripted driver. Plans on the true world (what the operator sees on the
/// video), drives at speed_factor of the geometric speed profile and is
/// silent while distracted.
class TeleopPolicy
{
public:
  TeleopPolicy(
    const OccupancyGrid & operator_map, OperatorProfile profile,
    std::vector<ExplorationPoint> exploration, planner::PlannerConfig planner_cfg,
    TeleopConfig cfg = {}, std::uint64_t run_seed = 0)
  : profile_(std::move(profile)),
    exploration_(std::move(exploration)),
    planner_cfg_(planner_cfg),
    cfg_(cfg),
    map_(operator_map.inflated(cfg.inflation_radius)),
    rng_(make_rng(profile_.seed, run_seed, 1))
  {
    profile_.validate();
  }

  std::optional<Velocity> act(const sim::Observation & obs)
  {
    if (obs.distracted || !obs.goal) {
      return std::nullopt;
    }
    if (obs.goal_index != leg_) {
      leg_ = obs.goal_index;
      visits_.clear();
      for (const auto & e : exploration_) {
        if (e.before_goal == leg_) {
          visits_.push_back(e);
        }
      }
      dwell_until_.reset();
    }
    const Pose & pose = obs.estimated_pose;
    for (const auto & e : obs.last_events) {
      if (e.kind == TickEvent::Kind::Collision) {
        backoff_until_ = obs.t + cfg_.backoff_time;
        path_.reset();
      }
    }
    if (backoff_until_ && obs.t < *backoff_until_ - 1e-9) {
      return Velocity{-cfg_.backoff_speed, 0.0};
    }
    backoff_until_.reset();
    if (dwell_until_) {
      if (obs.t < *dwell_until_ - 1e-9) {
        return Velocity{};
      }
      dwell_until_.reset();
      visits_.pop_front();
    }
    Pose target = *obs.goal;
    if (!visits_.empty()) {
      target = visits_.front().point;
      if (distance(pose, target) <= cfg_.waypoint_tolerance) {
        dwell_until_ = obs.t + visits_.front().dwell;
        return Velocity{};
      }
    }
    const bool target_changed = !target_ || target_->x != target.x || target_->y != target.y;
    if (target_changed || !path_ || path_->project(pose.x, pose.y).distance > cfg_.replan_distance) {
      target_ = target;
      auto route = planner::plan_on(map_, pose, target);
      path_.reset();
      if (route) {
        path_ = std::move(route->path);
      }
    }
    if (!path_) {
      return Velocity{};
    }
    const auto proj = path_->project(pose.x, pose.y);
    const double to_go = path_->length() - proj.s + proj.distance;
    double v_cap = profile_.speed_factor * sim::profile_speed(*path_, proj.s, to_go, planner_cfg_);
    const double bias = profile_.heading_noise_sigma > 0.0 ? noise_(rng_) * profile_.heading_noise_sigma : 0.0;
    return sim::pure_pursuit(*path_, pose, v_cap, cfg_.follower, bias);
  }

private:
  OperatorProfile profile_;
  std::vector<ExplorationPoint> exploration_;
  planner::PlannerConfig planner_cfg_;
  TeleopConfig cfg_;
  OccupancyGrid map_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  int leg_{-2};
  std::deque<ExplorationPoint> visits_;
  std::optional<double> dwell_until_;
  std::optional<double> backoff_until_;
  std::optional<Pose> target_;
  std::optional<planner::Path> path_;
};

/// Human-initiative switching by judgement. The operator forms a preferred
/// LOA from what they see and presses the switch button once the preference
/// has disagreed with the current LOA for reaction_delay seconds.
class HiJudgement
{
public:
  explicit HiJudgement(OperatorProfile profile) : profile_(std::move(profile)) { profile_.validate(); }

  /// The LOA the operator currently wants, or none when they accept the
  /// current one whatever it is.
  std::optional<LoaMode> desired(const sim::Observation & obs)
  {
    absorb(obs);
    if (obs.distracted) {
      return LoaMode::Autonomy;
    }
    if (stuck_trigger_ || obs.scan.noise_sigma_applied > 0.0) {
      return LoaMode::Teleoperation;
    }
    if (accepting_emics_) {
      return std::nullopt;
    }
    return profile_.preferred_loa;
  }

  bool request(const sim::Observation & obs)
  {
    const auto want = desired(obs);
    if (!want || *want == obs.loa) {
      pending_since_.reset();
      return false;
    }
    if (!pending_since_) {
      pending_since_ = obs.t;
    }
    if (obs.t >= *pending_since_ + profile_.reaction_delay - 1e-9) {
      pending_since_.reset();
      return true;
    }
    return false;
  }

private:
  void absorb(const sim::Observation & obs)
  {
    if (absorbed_t_ && *absorbed_t_ == obs.t) {
      return;
    }
    absorbed_t_ = obs.t;
    for (const auto & e : obs.last_events) {
      switch (e.kind) {
        case TickEvent::Kind::Stuck:
          stuck_trigger_ = true;
          stuck_at_ = obs.estimated_pose;
          break;
        case TickEvent::Kind::Switch:
          accepting_emics_ = e.loa_switch->initiator == Initiator::Emics;
          break;
        case TickEvent::Kind::DistractionEnd:
          accepting_emics_ = false;
          break;
        default:
          break;
      }
    }
    if (stuck_trigger_ && distance(obs.estimated_pose, stuck_at_) > kStuckClearDistance) {
      stuck_trigger_ = false;
    }
  }

  static constexpr double kStuckClearDistance = 1.0;  // m driven past the stall

  OperatorProfile profile_;
  bool stuck_trigger_{false};
  Pose stuck_at_;
  bool accepting_emics_{false};
  std::optional<double> pending_since_;
  std::optional<double> absorbed_t_;
};

/// Operator who, mid-manoeuvre, refuses an EMICS hand-over with probability
/// override_probability and switches back after reaction_delay.
class OverridePolicy
{
public:
  OverridePolicy(OperatorProfile profile, std::uint64_t run_seed = 0)
  : profile_(std::move(profile)), rng_(make_rng(profile_.seed, run_seed, 2))
  {
    profile_.validate();
  }

  /// Offers an observed switch; returns true if a counter was scheduled.
  bool consider(const LoaSwitchEvent & e, bool distracted)
  {
    if (e.initiator != Initiator::Emics || distracted) {
      return false;
    }
    const double u = uniform_(rng_);
    if (u < profile_.override_probability) {
      due_ = Counter{e.t + profile_.reaction_delay, e.to};
      return true;
    }
    return false;
  }

  bool request(const sim::Observation & obs)
  {
    for (const auto & ev : obs.last_events) {
      if (ev.kind == TickEvent::Kind::Switch) {
        if (ev.loa_switch->initiator == Initiator::Operator) {
          due_.reset();
        }
        consider(*ev.loa_switch, obs.distracted);
      }
    }
    if (due_ && obs.t >= due_->t - 1e-9) {
      const bool still = obs.loa == due_->against;
      due_.reset();
      return still;
    }
    return false;
  }

  std::optional<double> pending_time() const
  {
    return due_ ? std::optional<double>(due_->t) : std::nullopt;
  }

private:
  struct Counter
  {
    double t;
    LoaMode against;
  };

  OperatorProfile profile_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::optional<Counter> due_;
};

/// Everything a scripted operator does in one tick.
class OperatorModel
{
public:
  OperatorModel(
    const Scenario & scenario, OperatorProfile profile, ControlMode mode,
    planner::PlannerConfig planner_cfg, std::uint64_t run_seed, TeleopConfig cfg = {})
  : mode_(mode),
    policy_(AuthorityPolicy::for_mode(mode)),
    teleop_(sim::true_world(scenario), profile, scenario.exploration_points, planner_cfg, cfg, run_seed),
    hi_(profile),
    override_(profile, run_seed)
  {
  }

  TickInput act(const sim::Observation & obs)
  {
    TickInput in;
    if (obs.loa == LoaMode::Teleoperation) {
      in.teleop = teleop_.act(obs);
    }
    bool press = false;
    if (policy_.operator_may_switch) {
      press = hi_.request(obs);
    }
    if (mode_ == ControlMode::MixedInitiative) {
      press = override_.request(obs) || press;
    }
    in.switch_request = press;
    return in;
  }

private:
  ControlMode mode_;
  AuthorityPolicy policy_;
  TeleopPolicy teleop_;
  HiJudgement hi_;
  OverridePolicy override_;
};

}  // namespace emics::operators

#endif  // EMICS__OPERATOR__MODELS_HPP_
