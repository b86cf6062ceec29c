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

#ifndef EMICS__SIM__LASER_HPP_
#define EMICS__SIM__LASER_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/grid.hpp"
#include "emics/core/types.hpp"

namespace emics::sim
{

struct LaserConfig
{
  int beams{61};
  double fov{std::numbers::pi};  // rad, centred on the heading
  double max_range{5.0};         // m

  void validate() const
  {
    if (beams < 1 || !(fov >= 0.0) || !(max_range > 0.0)) {
      throw std::invalid_argument("laser config out of range");
    }
  }
};

struct LaserScan
{
  std::vector<double> angles;  // relative to the robot heading
  std::vector<double> ranges;  // m, >= 0; max_range means no return
  double noise_sigma_applied{0.0};
  double max_range{0.0};

  bool operator==(const LaserScan &) const = default;
};

/// Distance along the ray to the first occupied (or out-of-map) cell, capped
/// at max_range. Grid traversal after Amanatides & Woo.
inline double cast_ray(const OccupancyGrid & grid, double x, double y, double angle, double max_range)
{
  const double res = grid.resolution();
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  Cell c = grid.raw_cell(x, y);
  if (grid.occupied(c)) {
    return 0.0;
  }
  const double inf = std::numeric_limits<double>::infinity();
  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  const double ox = grid.origin().x;
  const double oy = grid.origin().y;
  auto first_boundary = [&](int cell, int step, double p, double o) {
    const double edge = o + (step > 0 ? cell + 1 : cell) * res;
    return edge - p;
  };
  double t_max_x = step_x != 0 ? first_boundary(c.x, step_x, x, ox) / dx : inf;
  double t_max_y = step_y != 0 ? first_boundary(c.y, step_y, y, oy) / dy : inf;
  const double t_dx = step_x != 0 ? res / std::abs(dx) : inf;
  const double t_dy = step_y != 0 ? res / std::abs(dy) : inf;
  while (true) {
    double t = 0.0;
    if (t_max_x < t_max_y) {
      t = t_max_x;
      t_max_x += t_dx;
      c.x += step_x;
    } else {
      t = t_max_y;
      t_max_y += t_dy;
      c.y += step_y;
    }
    if (t >= max_range) {
      return max_range;
    }
    if (grid.occupied(c)) {
      return t;
    }
  }
}

/// Scan from `pose` against `world`. When sigma > 0 every return gets
/// additive N(0, sigma^2) noise drawn from `rng` in beam order.
template<class Rng>
LaserScan simulate_laser(
  const OccupancyGrid & world, const Pose & pose, const LaserConfig & cfg, double sigma, Rng & rng)
{
  LaserScan scan;
  scan.noise_sigma_applied = sigma;
  scan.max_range = cfg.max_range;
  scan.angles.reserve(static_cast<std::size_t>(cfg.beams));
  scan.ranges.reserve(static_cast<std::size_t>(cfg.beams));
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  for (int i = 0; i < cfg.beams; ++i) {
    const double rel =
      cfg.beams == 1 ? 0.0 : (2 * i - (cfg.beams - 1)) * cfg.fov / (2.0 * (cfg.beams - 1));
    double r = cast_ray(world, pose.x, pose.y, pose.theta + rel, cfg.max_range);
    if (sigma > 0.0) {
      r = std::clamp(r + noise(rng), 0.0, cfg.max_range);
    }
    scan.angles.push_back(rel);
    scan.ranges.push_back(r);
  }
  return scan;
}

inline void to_json(nlohmann::json & j, const LaserConfig & c)
{
  j = nlohmann::json{{"beams", c.beams}, {"fov", c.fov}, {"maxRange", c.max_range}};
}

inline void from_json(const nlohmann::json & j, LaserConfig & c)
{
  LaserConfig d;
  c.beams = j.value("beams", d.beams);
  c.fov = j.value("fov", d.fov);
  c.max_range = j.value("maxRange", d.max_range);
  c.validate();
}

}  // namespace emics::sim

#endif  // EMICS__SIM__LASER_HPP_
