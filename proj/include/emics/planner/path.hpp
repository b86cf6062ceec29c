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

#ifndef EMICS__PLANNER__PATH_HPP_
#define EMICS__PLANNER__PATH_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "emics/core/types.hpp"

namespace emics::planner
{

/// Polyline in world coordinates with cumulative arc length.
class Path
{
public:
  Path() = default;

  explicit Path(std::vector<Pose> points) : points_(std::move(points))
  {
    arc_.resize(points_.size(), 0.0);
    for (std::size_t i = 1; i < points_.size(); ++i) {
      arc_[i] = arc_[i - 1] + distance(points_[i - 1], points_[i]);
    }
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
      points_[i].theta =
        std::atan2(points_[i + 1].y - points_[i].y, points_[i + 1].x - points_[i].x);
    }
    if (points_.size() >= 2) {
      points_.back().theta = points_[points_.size() - 2].theta;
    }
  }

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<Pose> & points() const { return points_; }
  const Pose & back() const { return points_.back(); }
  double length() const { return arc_.empty() ? 0.0 : arc_.back(); }

  struct Projection
  {
    double s{0.0};         // arc length of the closest point
    double distance{0.0};  // from the query point
    Pose point;
  };

  Projection project(double x, double y) const
  {
    Projection best;
    best.distance = std::numeric_limits<double>::infinity();
    if (points_.size() == 1) {
      return {0.0, std::hypot(x - points_[0].x, y - points_[0].y), points_[0]};
    }
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
      const Pose & a = points_[i];
      const Pose & b = points_[i + 1];
      const double vx = b.x - a.x;
      const double vy = b.y - a.y;
      const double len2 = vx * vx + vy * vy;
      double t = len2 > 0.0 ? ((x - a.x) * vx + (y - a.y) * vy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double px = a.x + t * vx;
      const double py = a.y + t * vy;
      const double d = std::hypot(x - px, y - py);
      if (d < best.distance) {
        best = {arc_[i] + t * (arc_[i + 1] - arc_[i]), d, Pose{px, py, a.theta}};
      }
    }
    return best;
  }

  Pose point_at(double s) const
  {
    if (points_.empty()) {
      return {};
    }
    if (s <= 0.0) {
      return points_.front();
    }
    if (s >= length()) {
      return points_.back();
    }
    const auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - arc_.begin()) - 1;
    const double seg = arc_[i + 1] - arc_[i];
    const double t = seg > 0.0 ? (s - arc_[i]) / seg : 0.0;
    return {points_[i].x + t * (points_[i + 1].x - points_[i].x),
            points_[i].y + t * (points_[i + 1].y - points_[i].y), points_[i].theta};
  }

  /// Largest heading change between the tangent at s and any tangent within
  /// the next `lookahead` metres.
  double turn_ahead(double s, double lookahead) const
  {
    if (points_.size() < 3) {
      return 0.0;
    }
    const double h0 = point_at(s).theta;
    double worst = 0.0;
    const double end = std::min(length(), s + lookahead);
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
      if (arc_[i] > end) {
        break;
      }
      if (arc_[i + 1] <= s) {
        continue;
      }
      worst = std::max(worst, std::abs(normalize_angle(points_[i].theta - h0)));
    }
    return worst;
  }

private:
  std::vector<Pose> points_;
  std::vector<double> arc_;
};

}  // namespace emics::planner

#endif  // EMICS__PLANNER__PATH_HPP_
