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

#ifndef EMICS__PLANNER__EXPERT_HPP_
#define EMICS__PLANNER__EXPERT_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/grid.hpp"
#include "emics/core/types.hpp"
#include "emics/planner/dijkstra.hpp"
#include "emics/planner/path.hpp"

namespace emics::planner
{

struct PlannerConfig
{
  double inflation_radius{0.25};  // robot radius + 0.05 m
  double v_max{kMaxLinearSpeed};
  double accel_step{kAccelStep};
  double goal_tolerance{0.15};
  double decel_distance{0.5};       // distance at which the stopping profile reaches v_max
  double curvature_slowdown{0.5};   // cap = v_max / (1 + gain * turn[rad])
  double curvature_lookahead{1.0};  // m
  double corridor{1.0};             // m, re-anchor / replan beyond this

  /// Constant deceleration implied by stopping from v_max within decel_distance.
  double decel() const { return v_max * v_max / (2.0 * decel_distance); }

  void validate() const
  {
    if (!(v_max > 0.0 && accel_step > 0.0 && goal_tolerance >= 0.0 && decel_distance > 0.0 &&
          curvature_slowdown >= 0.0 && corridor > 0.0 && inflation_radius >= 0.0))
    {
      throw std::invalid_argument("planner config out of range");
    }
  }
};

struct ExpertSuggestion
{
  Path path;
  double s_expert{0.0};  // m/s
  double distance_to_goal{0.0};
};

/// Converts a grid path to a world polyline running exactly from start to goal.
inline Path to_world_path(
  const OccupancyGrid & grid, const std::vector<Cell> & cells, const Pose & start, const Pose & goal)
{
  std::vector<Pose> pts;
  pts.push_back({start.x, start.y, 0.0});
  for (std::size_t i = 1; i + 1 < cells.size(); ++i) {
    pts.push_back(grid.cell_center(cells[i]));
  }
  pts.push_back({goal.x, goal.y, 0.0});
  return Path(std::move(pts));
}

struct PlannedRoute
{
  GridPath grid_path;
  Path path;
};

/// Plans on an already-inflated grid.
inline std::optional<PlannedRoute> plan_on(
  const OccupancyGrid & inflated, const Pose & start, const Pose & goal)
{
  const Cell s = inflated.raw_cell(start.x, start.y);
  const Cell g = inflated.raw_cell(goal.x, goal.y);
  auto gp = shortest_path(inflated, s, g, Connectivity::Eight);
  if (!gp) {
    return std::nullopt;
  }
  Path p = to_world_path(inflated, shortcut(inflated, gp->cells), start, goal);
  return PlannedRoute{std::move(*gp), std::move(p)};
}

/// Global shortest path on the static map, inflated by cfg.inflation_radius.
inline std::optional<PlannedRoute> plan_global(
  const OccupancyGrid & static_map, const Pose & start, const Pose & goal, const PlannerConfig & cfg)
{
  return plan_on(static_map.inflated(cfg.inflation_radius), start, goal);
}

/// Idealised speed toward the goal: an upper bound on what the robot could
/// do, limited by acceleration, the stopping profile and path curvature.
inline ExpertSuggestion suggest_speed(const Path & path, const RobotState & state, const PlannerConfig & cfg)
{
  ExpertSuggestion out;
  out.path = path;
  if (path.empty()) {
    return out;
  }
  const auto proj = path.project(state.pose.x, state.pose.y);
  out.distance_to_goal = (path.length() - proj.s) + proj.distance;
  if (distance(state.pose, path.back()) < cfg.goal_tolerance) {
    out.distance_to_goal = distance(state.pose, path.back());
    return out;
  }
  const double accel_cap = state.executed.linear + cfg.accel_step;
  const double stop_cap = std::sqrt(2.0 * cfg.decel() * out.distance_to_goal);
  const double turn = path.turn_ahead(proj.s, cfg.curvature_lookahead);
  const double curve_cap = cfg.v_max / (1.0 + cfg.curvature_slowdown * turn);
  out.s_expert = std::max(0.0, std::min({cfg.v_max, accel_cap, stop_cap, curve_cap}));
  return out;
}

/// The expert of the switching loop. Sees only the static map; replans when
/// the goal changes or the robot strays outside the corridor.
class ExpertPlanner
{
public:
  ExpertPlanner(const OccupancyGrid & static_map, PlannerConfig cfg)
  : cfg_(cfg), inflated_(static_map.inflated(cfg.inflation_radius))
  {
    cfg_.validate();
  }

  const PlannerConfig & config() const { return cfg_; }
  const std::optional<Path> & path() const { return path_; }

  ExpertSuggestion suggest(const RobotState & state, const std::optional<Pose> & goal)
  {
    if (!goal) {
      path_.reset();
      goal_.reset();
      return {};
    }
    const bool goal_changed = !goal_ || goal_->x != goal->x || goal_->y != goal->y;
    bool replan = goal_changed || !planned_;
    if (!replan && path_) {
      replan = path_->project(state.pose.x, state.pose.y).distance > cfg_.corridor;
    }
    if (replan) {
      goal_ = goal;
      planned_ = true;
      auto route = plan_on(inflated_, state.pose, *goal);
      if (route) {
        path_ = std::move(route->path);
      } else {
        path_.reset();
      }
    }
    if (!path_) {
      ExpertSuggestion none;
      none.distance_to_goal = distance(state.pose, *goal);
      return none;
    }
    return suggest_speed(*path_, state, cfg_);
  }

private:
  PlannerConfig cfg_;
  OccupancyGrid inflated_;
  std::optional<Path> path_;
  std::optional<Pose> goal_;
  bool planned_{false};
};

inline void to_json(nlohmann::json & j, const PlannerConfig & c)
{
  j = nlohmann::json{
    {"inflationRadius", c.inflation_radius}, {"vMax", c.v_max}, {"accelStep", c.accel_step},
    {"goalTolerance", c.goal_tolerance}, {"decelDistance", c.decel_distance},
    {"curvatureSlowdown", c.curvature_slowdown}, {"curvatureLookahead", c.curvature_lookahead},
    {"corridor", c.corridor}};
}

inline void from_json(const nlohmann::json & j, PlannerConfig & c)
{
  PlannerConfig d;
  c.inflation_radius = j.value("inflationRadius", d.inflation_radius);
  c.v_max = j.value("vMax", d.v_max);
  c.accel_step = j.value("accelStep", d.accel_step);
  c.goal_tolerance = j.value("goalTolerance", d.goal_tolerance);
  c.decel_distance = j.value("decelDistance", d.decel_distance);
  c.curvature_slowdown = j.value("curvatureSlowdown", d.curvature_slowdown);
  c.curvature_lookahead = j.value("curvatureLookahead", d.curvature_lookahead);
  c.corridor = j.value("corridor", d.corridor);
  c.validate();
}

}  // namespace emics::planner

#endif  // EMICS__PLANNER__EXPERT_HPP_
