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

#ifndef EMICS__SIM__SIMULATION_HPP_
#define EMICS__SIM__SIMULATION_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/grid.hpp"
#include "emics/core/run_log.hpp"
#include "emics/core/scenario.hpp"
#include "emics/core/types.hpp"
#include "emics/error_signal.hpp"
#include "emics/planner/expert.hpp"
#include "emics/sim/autonomy.hpp"
#include "emics/sim/laser.hpp"
#include "emics/sim/latency.hpp"
#include "emics/switchers/switchers.hpp"

namespace emics::sim
{

struct SimConfig
{
  double robot_radius{0.2};        // m
  double max_angular{1.0};         // rad/s
  LaserConfig laser;
  double drift_gain{0.3};          // position drift std-dev per tick, per metre of scan sigma
  double heading_drift_gain{0.2};  // heading drift std-dev per tick (rad), per metre of scan sigma
  double drift_decay{0.9};         // AR(1) coefficient of the localisation error

  void validate() const
  {
    laser.validate();
    if (!(robot_radius > 0.0 && max_angular > 0.0 && drift_gain >= 0.0 &&
          heading_drift_gain >= 0.0 && drift_decay >= 0.0 && drift_decay < 1.0))
    {
      throw std::invalid_argument("sim config out of range");
    }
  }
};

/// Every tunable of a run; snapshotted into the log header.
struct RunConfig
{
  SimConfig sim;
  planner::PlannerConfig planner;
  AutonomyConfig autonomy;
  ErrorFilterConfig filter;
  SwitcherConfig switcher;
};

/// What a scripted or live operator can see before a tick.
struct Observation
{
  double t{0.0};
  Pose estimated_pose;
  Velocity executed;
  std::optional<Pose> goal;
  int goal_index{0};  // scenario goal index, -1 for an operator-set goal
  LaserScan scan;
  LoaMode loa{LoaMode::Teleoperation};
  ControlMode mode{ControlMode::PureTeleop};
  bool distracted{false};
  double distraction_onset{0.0};     // valid while distracted
  std::vector<TickEvent> last_events;  // events of the previous tick
};

inline OccupancyGrid true_world(const Scenario & s)
{
  OccupancyGrid g = s.static_map;
  for (const Rect & r : s.true_obstacles) {
    g.fill_rect(r);
  }
  return g;
}

/// Fixed-step world. Advanced only by step(); fully determined by the
/// scenario (including its seed), the config and the input stream.
class Simulation
{
public:
  Simulation(Scenario scenario, ControlMode mode, RunConfig cfg = {})
  : scenario_(std::move(scenario)),
    cfg_(cfg),
    mode_(mode),
    policy_(AuthorityPolicy::for_mode(mode)),
    world_(true_world(scenario_)),
    rng_(scenario_.seed),
    expert_(scenario_.static_map, cfg_.planner),
    autonomy_(scenario_.static_map, cfg_.autonomy, cfg_.planner, cfg_.sim.robot_radius),
    filter_(cfg_.filter),
    switcher_(cfg_.switcher),
    distractions_(scenario_.distraction_windows.size())
  {
    scenario_.validate();
    cfg_.sim.validate();
    truth_ = scenario_.start;
    truth_.theta = normalize_angle(truth_.theta);
    estimate_ = truth_;
    loa_ = initial_loa(mode, LoaMode::Teleoperation);
    scan_ = take_scan();
    autonomy_.observe(estimate_, scan_);
  }

  /// Sets the LOA a mixed or human-initiative trial starts in.
  void set_initial_loa(LoaMode m)
  {
    if (tick_ == 0) {
      loa_ = initial_loa(mode_, m);
    }
  }

  const Scenario & scenario() const { return scenario_; }
  const RunConfig & config() const { return cfg_; }
  ControlMode mode() const { return mode_; }
  const AuthorityPolicy & policy() const { return policy_; }
  LoaMode loa() const { return loa_; }
  long tick() const { return tick_; }
  double dt() const { return scenario_.dt(); }
  double now() const { return static_cast<double>(tick_) * dt(); }
  const Pose & true_pose() const { return truth_; }
  const Pose & estimated_pose() const { return estimate_; }
  const Velocity & executed() const { return executed_; }
  const LaserScan & scan() const { return scan_; }
  const OccupancyGrid & world() const { return world_; }
  const ErrorFilter & filter() const { return filter_; }
  const planner::ExpertPlanner & expert() const { return expert_; }
  const AutonomyController & autonomy() const { return autonomy_; }

  std::optional<Pose> active_goal() const
  {
    if (custom_goal_) {
      return custom_goal_;
    }
    if (goal_index_ < scenario_.goals.size()) {
      return scenario_.goals[goal_index_];
    }
    return std::nullopt;
  }

  /// Every scenario goal has been reached and no operator goal is pending.
  bool done() const { return goal_index_ >= scenario_.goals.size() && !custom_goal_; }

  bool distracted()
  {
    update_distraction();
    for (const auto & d : distractions_) {
      if (d.active) return true;
    }
    return false;
  }

  Observation observe()
  {
    Observation o;
    o.t = now();
    o.estimated_pose = estimate_;
    o.executed = executed_;
    o.goal = active_goal();
    o.goal_index = custom_goal_ ? -1 : static_cast<int>(goal_index_);
    o.scan = scan_;
    o.loa = loa_;
    o.mode = mode_;
    o.distracted = distracted();
    for (const auto & d : distractions_) {
      if (d.active) o.distraction_onset = d.start;
    }
    o.last_events = last_events_;
    return o;
  }

  TickRecord step(const TickInput & input)
  {
    const double t = now();
    const double dt_s = dt();
    update_distraction();
    TickRecord rec;
    rec.t = t;
    rec.input = input;
    rec.events = std::move(pending_);
    pending_.clear();

    if (input.goal) {
      custom_goal_ = Pose{input.goal->x, input.goal->y, 0.0};
    }
    if (input.switch_request) {
      request_switch(Initiator::Operator, "operator request", t, rec.events);
    }

    // Teleop channel, delayed while the robot sits in a latency region.
    const double delay = latency_at(scenario_.latency_regions, truth_.x, truth_.y);
    latency_.push(tick_, input.teleop, delay_ticks(delay, scenario_.tick_rate));
    if (auto slot = latency_.pop_due(tick_)) {
      teleop_ = *slot;
    }

    const LoaMode driving = loa_;
    const auto goal = active_goal();
    Velocity cmd;
    if (done()) {
      cmd = {};
    } else if (driving == LoaMode::Teleoperation) {
      cmd = teleop_.value_or(Velocity{});
    } else {
      const auto a = autonomy_.command(estimate_, goal, scan_, t);
      cmd = a.cmd;
      if (a.stuck) {
        rec.events.push_back(TickEvent::stuck());
      }
    }
    rec.commanded = cmd;

    const auto & pc = cfg_.planner;
    Velocity exec;
    exec.linear = std::clamp(
      std::clamp(cmd.linear, executed_.linear - pc.accel_step, executed_.linear + pc.accel_step),
      -pc.v_max, pc.v_max);
    exec.angular = std::clamp(cmd.angular, -cfg_.sim.max_angular, cfg_.sim.max_angular);

    const double nx = truth_.x + exec.linear * std::cos(truth_.theta) * dt_s;
    const double ny = truth_.y + exec.linear * std::sin(truth_.theta) * dt_s;
    const double r = cfg_.sim.robot_radius;
    const bool was_touching = world_.disk_collides(truth_.x, truth_.y, r);
    const bool blocked = exec.linear != 0.0 && world_.disk_collides(nx, ny, r) &&
                         (!was_touching || world_.occupied_at(nx, ny));
    if (blocked) {
      const double decayed = std::max(0.0, std::abs(executed_.linear) - pc.accel_step);
      exec.linear = std::copysign(decayed, executed_.linear);
      rec.events.push_back(TickEvent::collision());
    } else {
      truth_.x = nx;
      truth_.y = ny;
    }
    truth_.theta = normalize_angle(truth_.theta + exec.angular * dt_s);
    executed_ = exec;

    // Localisation error grows with the laser noise at the true pose.
    const double sigma = noise_at(scenario_.noise_regions, truth_.x, truth_.y);
    drift_x_ *= cfg_.sim.drift_decay;
    drift_y_ *= cfg_.sim.drift_decay;
    drift_theta_ *= cfg_.sim.drift_decay;
    if (sigma > 0.0) {
      std::normal_distribution<double> n(0.0, 1.0);
      drift_x_ += cfg_.sim.drift_gain * sigma * n(rng_);
      drift_y_ += cfg_.sim.drift_gain * sigma * n(rng_);
      drift_theta_ += cfg_.sim.heading_drift_gain * sigma * n(rng_);
    }
    estimate_ = {truth_.x + drift_x_, truth_.y + drift_y_, normalize_angle(truth_.theta + drift_theta_)};

    if (goal && distance(estimate_, *goal) <= pc.goal_tolerance) {
      if (custom_goal_) {
        custom_goal_.reset();
        rec.events.push_back(TickEvent::goal_reached(-1));
      } else {
        rec.events.push_back(TickEvent::goal_reached(static_cast<int>(goal_index_)));
        ++goal_index_;
      }
    }

    scan_ = take_scan();
    autonomy_.observe(estimate_, scan_);

    const auto suggestion = expert_.suggest({estimate_, executed_}, active_goal());
    const double e_raw = raw_error(suggestion.s_expert, executed_.linear, cfg_.filter.e_max);
    const double e_filtered = filter_.update(e_raw, t);

    if (policy_.emics_may_switch && !done()) {
      const auto d = switcher_.decide(e_filtered, executed_.linear, t, filter_);
      if (d.should_switch) {
        request_switch(Initiator::Emics, d.reason, t, rec.events);
      }
    }

    rec.true_pose = truth_;
    rec.estimated_pose = estimate_;
    rec.executed = executed_;
    rec.loa = driving;
    rec.s_expert = suggestion.s_expert;
    rec.e_raw = filter_.state().e_raw;
    rec.e_filtered = e_filtered;
    rec.noise_sigma = scan_.noise_sigma_applied;
    last_events_ = rec.events;
    ++tick_;
    return rec;
  }

private:
  struct DistractionState
  {
    bool triggered{false};
    bool active{false};
    double start{0.0};
  };

  LaserScan take_scan()
  {
    const double sigma = noise_at(scenario_.noise_regions, truth_.x, truth_.y);
    return simulate_laser(world_, truth_, cfg_.sim.laser, sigma, rng_);
  }

  void request_switch(Initiator who, std::string reason, double t, std::vector<TickEvent> & events)
  {
    auto res = apply_switch_request(loa_, who, policy_, t, filter_, std::move(reason));
    if (res.granted()) {
      loa_ = res.loa;
      events.push_back(TickEvent::switched(*res.event));
    } else {
      events.push_back(TickEvent::denied(res.denied_reason));
    }
  }

  // Evaluated once per tick, before the operator acts.
  void update_distraction()
  {
    if (distraction_tick_ == tick_) {
      return;
    }
    distraction_tick_ = tick_;
    const double t = now();
    constexpr double eps = 1e-9;
    for (std::size_t i = 0; i < distractions_.size(); ++i) {
      const auto & w = scenario_.distraction_windows[i];
      auto & d = distractions_[i];
      if (!d.triggered) {
        const bool fire = w.start_time ? t >= *w.start_time - eps : w.region->contains(truth_.x, truth_.y);
        if (fire) {
          d.triggered = true;
          d.active = w.duration > 0.0;
          d.start = t;
          if (d.active) {
            pending_.push_back(TickEvent::distraction_start());
          }
        }
      } else if (d.active && t >= d.start + w.duration - eps) {
        d.active = false;
        pending_.push_back(TickEvent::distraction_end());
      }
    }
  }

  Scenario scenario_;
  RunConfig cfg_;
  ControlMode mode_;
  AuthorityPolicy policy_;
  OccupancyGrid world_;
  std::mt19937_64 rng_;
  planner::ExpertPlanner expert_;
  AutonomyController autonomy_;
  ErrorFilter filter_;
  LoaSwitcher switcher_;
  LatencyQueue latency_;
  std::optional<Velocity> teleop_;

  Pose truth_;
  Pose estimate_;
  Velocity executed_;
  double drift_x_{0.0};
  double drift_y_{0.0};
  double drift_theta_{0.0};
  LaserScan scan_;
  LoaMode loa_{LoaMode::Teleoperation};
  std::size_t goal_index_{0};
  std::optional<Pose> custom_goal_;
  std::vector<DistractionState> distractions_;
  long distraction_tick_{-1};
  std::vector<TickEvent> pending_;
  std::vector<TickEvent> last_events_;
  long tick_{0};
};

inline void to_json(nlohmann::json & j, const SimConfig & c)
{
  j = nlohmann::json{
    {"robotRadius", c.robot_radius}, {"maxAngular", c.max_angular}, {"laser", c.laser},
    {"driftGain", c.drift_gain}, {"headingDriftGain", c.heading_drift_gain},
    {"driftDecay", c.drift_decay}};
}

inline void from_json(const nlohmann::json & j, SimConfig & c)
{
  SimConfig d;
  c.robot_radius = j.value("robotRadius", d.robot_radius);
  c.max_angular = j.value("maxAngular", d.max_angular);
  c.laser = j.value("laser", d.laser);
  c.drift_gain = j.value("driftGain", d.drift_gain);
  c.heading_drift_gain = j.value("headingDriftGain", d.heading_drift_gain);
  c.drift_decay = j.value("driftDecay", d.drift_decay);
  c.validate();
}

inline void to_json(nlohmann::json & j, const RunConfig & c)
{
  j = nlohmann::json{
    {"sim", c.sim}, {"planner", c.planner}, {"autonomy", c.autonomy}, {"filter", c.filter},
    {"switcher", c.switcher}};
}

inline void from_json(const nlohmann::json & j, RunConfig & c)
{
  RunConfig d;
  c.sim = j.value("sim", d.sim);
  c.planner = j.value("planner", d.planner);
  c.autonomy = j.value("autonomy", d.autonomy);
  c.filter = j.value("filter", d.filter);
  c.switcher = j.value("switcher", d.switcher);
}

}  // namespace emics::sim

#endif  // EMICS__SIM__SIMULATION_HPP_
