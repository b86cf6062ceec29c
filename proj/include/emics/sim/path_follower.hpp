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

#ifndef EMICS__SIM__PATH_FOLLOWER_HPP_
#define EMICS__SIM__PATH_FOLLOWER_HPP_

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "emics/core/types.hpp"
#include "emics/planner/expert.hpp"
#include "emics/planner/path.hpp"

namespace emics::sim
{

struct FollowerConfig
{
  double lookahead{0.6};      // m
  double heading_gain{1.5};   // rad/s per rad
  double max_angular{1.0};    // rad/s
  double align_stop{1.2};     // rad; rotate in place beyond this heading error
};

/// Speed the path's geometry allows at arc length s, ignoring acceleration.
inline double profile_speed(const planner::Path & path, double s, double dist_to_goal, const planner::PlannerConfig & cfg)
{
  const double stop_cap = std::sqrt(2.0 * cfg.decel() * std::max(0.0, dist_to_goal));
  const double turn = path.turn_ahead(s, cfg.curvature_lookahead);
  const double curve_cap = cfg.v_max / (1.0 + cfg.curvature_slowdown * turn);
  return std::min({cfg.v_max, stop_cap, curve_cap});
}

/// Pure pursuit toward the point `lookahead` metres past the projection.
/// `v_cap` is scaled by cos(heading error) and dropped to zero when the
/// error exceeds align_stop, so sharp corners are taken on the spot.
inline Velocity pure_pursuit(
  const planner::Path & path, const Pose & pose, double v_cap, const FollowerConfig & cfg,
  double heading_bias = 0.0)
{
  if (path.empty()) {
    return {};
  }
  const auto proj = path.project(pose.x, pose.y);
  const Pose target = path.point_at(proj.s + cfg.lookahead);
  double alpha = heading_bias;
  if (std::hypot(target.x - pose.x, target.y - pose.y) > 1e-9) {
    alpha += std::atan2(target.y - pose.y, target.x - pose.x) - pose.theta;
  }
  alpha = normalize_angle(alpha);
  Velocity v;
  v.angular = std::clamp(cfg.heading_gain * alpha, -cfg.max_angular, cfg.max_angular);
  v.linear = std::abs(alpha) > cfg.align_stop ? 0.0 : v_cap * std::max(0.0, std::cos(alpha));
  return v;
}

inline void to_json(nlohmann::json & j, const FollowerConfig & c)
{
  j = nlohmann::json{
    {"lookahead", c.lookahead}, {"headingGain", c.heading_gain}, {"maxAngular", c.max_angular},
    {"alignStop", c.align_stop}};
}

inline void from_json(const nlohmann::json & j, FollowerConfig & c)
{
  FollowerConfig d;
  c.lookahead = j.value("lookahead", d.lookahead);
  c.heading_gain = j.value("headingGain", d.heading_gain);
  c.max_angular = j.value("maxAngular", d.max_angular);
  c.align_stop = j.value("alignStop", d.align_stop);
}

}  // namespace emics::sim

#endif  // EMICS__SIM__PATH_FOLLOWER_HPP_
