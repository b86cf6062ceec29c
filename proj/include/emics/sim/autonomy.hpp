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

#ifndef EMICS__SIM__AUTONOMY_HPP_
#define EMICS__SIM__AUTONOMY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/grid.hpp"
#include "emics/core/types.hpp"
#include "emics/planner/expert.hpp"
#include "emics/sim/laser.hpp"
#include "emics/sim/path_follower.hpp"

namespace emics::sim
{

struct AutonomyConfig
{
  double inflation_radius{0.4};  // m, more conservative than the expert
  FollowerConfig follower;
  double replan_period{2.0};        // s
  double retry_period{0.5};         // s between attempts while blocked or stuck
  double block_check_distance{1.0};  // m of path checked against sensed obstacles
  double block_clearance{0.25};     // m
  double front_half_angle{0.5};     // rad, sector used for the proximity slowdown
  double slow_range{0.35};          // m, full stop at or below
  double slow_span{0.8};            // m, full speed at slow_range + slow_span

  void validate() const
  {
    if (!(inflation_radius >= 0.0 && replan_period > 0.0 && retry_period > 0.0 &&
          block_check_distance >= 0.0 && block_clearance >= 0.0 && slow_span > 0.0))
    {
      throw std::invalid_argument("autonomy config out of range");
    }
  }
};

struct AutonomyCommand
{
  Velocity cmd;
  bool stuck{false};
};

/// Navigation stack of the autonomy LOA. Plans on the static map plus a live
/// layer of obstacles sensed by the laser, follows the path with pure
/// pursuit and stops to replan when a sensed obstacle sits on the path.
class AutonomyController
{
public:
  AutonomyController(
    const OccupancyGrid & static_map, AutonomyConfig cfg, planner::PlannerConfig planner_cfg,
    double robot_radius)
  : cfg_(cfg),
    planner_cfg_(planner_cfg),
    robot_radius_(robot_radius),
    static_(static_map),
    static_inflated_(static_map.inflated(cfg.inflation_radius)),
    live_(static_map.width(), static_map.height(), static_map.resolution(), static_map.origin()),
    inflate_count_(static_map.size(), 0)
  {
    cfg_.validate();
    const double res = static_map.resolution();
    const int r = static_cast<int>(std::ceil(cfg_.inflation_radius / res));
    const double r2 = (cfg_.inflation_radius / res) * (cfg_.inflation_radius / res) + 1e-9;
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy <= r2) {
          offsets_.push_back({dx, dy});
        }
      }
    }
  }

  const AutonomyConfig & config() const { return cfg_; }
  const OccupancyGrid & live_layer() const { return live_; }
  const std::optional<planner::Path> & path() const { return path_; }

  /// Integrates one scan taken at the estimated pose: marks returns that fall
  /// on free static cells, clears cells the beams passed through.
  void observe(const Pose & est, const LaserScan & scan)
  {
    const double res = static_.resolution();
    for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
      const double a = est.theta + scan.angles[i];
      const double ca = std::cos(a);
      const double sa = std::sin(a);
      const double r = scan.ranges[i];
      const bool hit = r < scan.max_range - 1e-9;
      const double clear_to = hit ? r - 0.5 * res : r;
      for (double d = 0.0; d < clear_to; d += 0.5 * res) {
        set_live(static_.raw_cell(est.x + d * ca, est.y + d * sa), false);
      }
      if (hit) {
        // Nudge past the boundary so an exact return lands in the hit cell.
        const Cell c = static_.raw_cell(est.x + (r + 0.01) * ca, est.y + (r + 0.01) * sa);
        if (static_.in_bounds(c) && static_.at(c) == Occupancy::Free) {
          set_live(c, true);
        }
      }
    }
    const Cell lo = static_.raw_cell(est.x - robot_radius_, est.y - robot_radius_);
    const Cell hi = static_.raw_cell(est.x + robot_radius_, est.y + robot_radius_);
    for (int y = lo.y; y <= hi.y; ++y) {
      for (int x = lo.x; x <= hi.x; ++x) {
        const Pose c = static_.cell_center({x, y});
        if (std::hypot(c.x - est.x, c.y - est.y) <= robot_radius_) {
          set_live({x, y}, false);
        }
      }
    }
  }

  AutonomyCommand command(
    const Pose & est, const std::optional<Pose> & goal, const LaserScan & scan, double t)
  {
    if (!goal) {
      path_.reset();
      goal_.reset();
      return {};
    }
    const bool goal_changed = !goal_ || goal_->x != goal->x || goal_->y != goal->y;
    const bool blocked = path_ && path_blocked(est);
    const bool may_retry = t - last_attempt_ >= cfg_.retry_period - 1e-9;
    const bool periodic = t - last_attempt_ >= cfg_.replan_period - 1e-9;
    if (goal_changed || ((blocked || !path_) && may_retry) || periodic) {
      const bool must = goal_changed || blocked || !path_;
      goal_ = goal;
      last_attempt_ = t;
      auto route = planner::plan_on(planning_grid(), est, *goal);
      if (route && !blocked_path(route->path, est)) {
        path_ = std::move(route->path);
      } else if (must) {
        path_.reset();
      }
    } else if (blocked) {
      return {};  // wait for the next attempt
    }
    if (!path_) {
      return {Velocity{}, true};
    }
    const auto proj = path_->project(est.x, est.y);
    const double to_goal = path_->length() - proj.s + proj.distance;
    double v_cap = profile_speed(*path_, proj.s, to_goal, planner_cfg_);
    v_cap = std::min(v_cap, proximity_cap(scan));
    return {pure_pursuit(*path_, est, v_cap, cfg_.follower), false};
  }

  /// Static map plus inflated live layer.
  OccupancyGrid planning_grid() const
  {
    OccupancyGrid g = static_inflated_;
    for (std::size_t i = 0; i < inflate_count_.size(); ++i) {
      if (inflate_count_[i] > 0) {
        g.set(g.cell_of(i), Occupancy::Occupied);
      }
    }
    return g;
  }

  double proximity_cap(const LaserScan & scan) const
  {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
      if (std::abs(scan.angles[i]) <= cfg_.front_half_angle) {
        nearest = std::min(nearest, scan.ranges[i]);
      }
    }
    if (!std::isfinite(nearest)) {
      return planner_cfg_.v_max;
    }
    return planner_cfg_.v_max * std::clamp((nearest - cfg_.slow_range) / cfg_.slow_span, 0.0, 1.0);
  }

  bool path_blocked(const Pose & est) const { return path_ && blocked_path(*path_, est); }

  /// A sensed obstacle lies within block_clearance of the next
  /// block_check_distance metres of `path`.
  bool blocked_path(const planner::Path & path, const Pose & est) const
  {
    const double s0 = path.project(est.x, est.y).s;
    const double s1 = std::min(path.length(), s0 + cfg_.block_check_distance);
    const double step = 0.5 * static_.resolution();
    for (double s = s0; s <= s1 + 1e-12; s += step) {
      const Pose p = path.point_at(s);
      if (live_near(p.x, p.y, cfg_.block_clearance)) {
        return true;
      }
    }
    return false;
  }

private:
  bool live_near(double cx, double cy, double radius) const
  {
    const double res = live_.resolution();
    const Cell lo = live_.raw_cell(cx - radius, cy - radius);
    const Cell hi = live_.raw_cell(cx + radius, cy + radius);
    for (int y = std::max(lo.y, 0); y <= std::min(hi.y, live_.height() - 1); ++y) {
      for (int x = std::max(lo.x, 0); x <= std::min(hi.x, live_.width() - 1); ++x) {
        if (live_.at({x, y}) != Occupancy::Occupied) {
          continue;
        }
        const double min_x = live_.origin().x + x * res;
        const double min_y = live_.origin().y + y * res;
        const double qx = std::clamp(cx, min_x, min_x + res);
        const double qy = std::clamp(cy, min_y, min_y + res);
        if ((qx - cx) * (qx - cx) + (qy - cy) * (qy - cy) < radius * radius) {
          return true;
        }
      }
    }
    return false;
  }

  void set_live(Cell c, bool occupied)
  {
    if (!live_.in_bounds(c)) {
      return;
    }
    const bool was = live_.at(c) == Occupancy::Occupied;
    if (was == occupied) {
      return;
    }
    live_.set(c, occupied ? Occupancy::Occupied : Occupancy::Free);
    const int delta = occupied ? 1 : -1;
    for (const Cell & o : offsets_) {
      const Cell n{c.x + o.x, c.y + o.y};
      if (live_.in_bounds(n)) {
        inflate_count_[live_.index(n)] += delta;
      }
    }
  }

  AutonomyConfig cfg_;
  planner::PlannerConfig planner_cfg_;
  double robot_radius_;
  OccupancyGrid static_;
  OccupancyGrid static_inflated_;
  OccupancyGrid live_;
  std::vector<std::int32_t> inflate_count_;
  std::vector<Cell> offsets_;
  std::optional<planner::Path> path_;
  std::optional<Pose> goal_;
  double last_attempt_{-std::numeric_limits<double>::infinity()};
};

inline void to_json(nlohmann::json & j, const AutonomyConfig & c)
{
  j = nlohmann::json{
    {"inflationRadius", c.inflation_radius}, {"follower", c.follower},
    {"replanPeriod", c.replan_period}, {"retryPeriod", c.retry_period},
    {"blockCheckDistance", c.block_check_distance}, {"blockClearance", c.block_clearance},
    {"frontHalfAngle", c.front_half_angle}, {"slowRange", c.slow_range}, {"slowSpan", c.slow_span}};
}

inline void from_json(const nlohmann::json & j, AutonomyConfig & c)
{
  AutonomyConfig d;
  c.inflation_radius = j.value("inflationRadius", d.inflation_radius);
  c.follower = j.value("follower", d.follower);
  c.replan_period = j.value("replanPeriod", d.replan_period);
  c.retry_period = j.value("retryPeriod", d.retry_period);
  c.block_check_distance = j.value("blockCheckDistance", d.block_check_distance);
  c.block_clearance = j.value("blockClearance", d.block_clearance);
  c.front_half_angle = j.value("frontHalfAngle", d.front_half_angle);
  c.slow_range = j.value("slowRange", d.slow_range);
  c.slow_span = j.value("slowSpan", d.slow_span);
  c.validate();
}

}  // namespace emics::sim

#endif  // EMICS__SIM__AUTONOMY_HPP_
