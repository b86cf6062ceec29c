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

#ifndef EMICS__CORE__GRID_HPP_
#define EMICS__CORE__GRID_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/types.hpp"

namespace emics
{

enum class Occupancy : std::uint8_t { Free = 0, Occupied = 1 };

struct Cell
{
  int x{0};
  int y{0};

  bool operator==(const Cell &) const = default;
};

class OutOfMapError : public std::out_of_range
{
public:
  explicit OutOfMapError(const std::string & what) : std::out_of_range(what) {}
};

/// Binary occupancy grid. Cell (0,0) has its lower-left corner at origin; the
/// origin's heading is ignored (axis-aligned maps only).
class OccupancyGrid
{
public:
  OccupancyGrid() = default;

  OccupancyGrid(int width, int height, double resolution, Pose origin = {})
  : width_(width),
    height_(height),
    resolution_(resolution),
    origin_(origin),
    cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), Occupancy::Free)
  {
    if (width < 0 || height < 0) {
      throw std::invalid_argument("OccupancyGrid: negative dimensions");
    }
    if (!(resolution > 0.0)) {
      throw std::invalid_argument("OccupancyGrid: resolution must be > 0");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Pose & origin() const { return origin_; }
  std::size_t size() const { return cells_.size(); }
  const std::vector<Occupancy> & cells() const { return cells_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }

  std::size_t index(Cell c) const
  {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  Cell cell_of(std::size_t idx) const
  {
    return {static_cast<int>(idx % static_cast<std::size_t>(width_)),
            static_cast<int>(idx / static_cast<std::size_t>(width_))};
  }

  Occupancy at(Cell c) const
  {
    if (!in_bounds(c)) {
      throw OutOfMapError("cell outside map");
    }
    return cells_[index(c)];
  }

  /// Out-of-map cells count as occupied.
  bool occupied(Cell c) const { return !in_bounds(c) || cells_[index(c)] == Occupancy::Occupied; }

  void set(Cell c, Occupancy v)
  {
    if (!in_bounds(c)) {
      throw OutOfMapError("cell outside map");
    }
    cells_[index(c)] = v;
  }

  /// Unchecked floor division; may lie outside the map.
  Cell raw_cell(double x, double y) const
  {
    return {static_cast<int>(std::floor((x - origin_.x) / resolution_)),
            static_cast<int>(std::floor((y - origin_.y) / resolution_))};
  }

  Cell world_to_cell(double x, double y) const
  {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw OutOfMapError("non-finite position");
    }
    Cell c = raw_cell(x, y);
    if (!in_bounds(c)) {
      throw OutOfMapError(
        "position (" + std::to_string(x) + ", " + std::to_string(y) + ") outside map");
    }
    return c;
  }

  Pose cell_center(Cell c) const
  {
    return {origin_.x + (c.x + 0.5) * resolution_, origin_.y + (c.y + 0.5) * resolution_, 0.0};
  }

  bool occupied_at(double x, double y) const { return occupied(raw_cell(x, y)); }

  /// Marks every cell whose square overlaps the rectangle's interior.
  void fill_rect(const Rect & r, Occupancy v = Occupancy::Occupied)
  {
    // Snap near-integer quotients so 0.9 / 0.1 lands on cell 9, not 10.
    constexpr double eps = 1e-9;
    const auto lo = [&](double v, double o) {
      return static_cast<int>(std::floor((v - o) / resolution_ + eps));
    };
    const auto hi = [&](double v, double o) {
      return static_cast<int>(std::ceil((v - o) / resolution_ - eps)) - 1;
    };
    const int x0 = std::max(0, lo(r.min_x, origin_.x));
    const int y0 = std::max(0, lo(r.min_y, origin_.y));
    const int x1 = std::min(width_ - 1, hi(r.max_x, origin_.x));
    const int y1 = std::min(height_ - 1, hi(r.max_y, origin_.y));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        cells_[index({x, y})] = v;
      }
    }
  }

  /// Cell-wise OR with a same-shaped grid.
  void overlay(const OccupancyGrid & other)
  {
    if (other.width_ != width_ || other.height_ != height_) {
      throw std::invalid_argument("overlay: grid shape mismatch");
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (other.cells_[i] == Occupancy::Occupied) {
        cells_[i] = Occupancy::Occupied;
      }
    }
  }

  /// Grows obstacles by `radius` metres (disk structuring element on cell centres).
  OccupancyGrid inflated(double radius) const
  {
    OccupancyGrid out = *this;
    if (radius <= 0.0) {
      return out;
    }
    const int r = static_cast<int>(std::ceil(radius / resolution_));
    const double r2 = (radius / resolution_) * (radius / resolution_) + 1e-9;
    std::vector<Cell> offsets;
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy <= r2) {
          offsets.push_back({dx, dy});
        }
      }
    }
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        if (cells_[index({x, y})] != Occupancy::Occupied) {
          continue;
        }
        for (const Cell & o : offsets) {
          const Cell c{x + o.x, y + o.y};
          if (in_bounds(c)) {
            out.cells_[out.index(c)] = Occupancy::Occupied;
          }
        }
      }
    }
    return out;
  }

  /// True if any occupied (or out-of-map) cell intersects the disk.
  bool disk_collides(double cx, double cy, double radius) const
  {
    const Cell lo = raw_cell(cx - radius, cy - radius);
    const Cell hi = raw_cell(cx + radius, cy + radius);
    for (int y = lo.y; y <= hi.y; ++y) {
      for (int x = lo.x; x <= hi.x; ++x) {
        if (!occupied({x, y})) {
          continue;
        }
        const double min_x = origin_.x + x * resolution_;
        const double min_y = origin_.y + y * resolution_;
        const double qx = std::clamp(cx, min_x, min_x + resolution_);
        const double qy = std::clamp(cy, min_y, min_y + resolution_);
        if ((qx - cx) * (qx - cx) + (qy - cy) * (qy - cy) < radius * radius) {
          return true;
        }
      }
    }
    return false;
  }

  bool operator==(const OccupancyGrid &) const = default;

private:
  int width_{0};
  int height_{0};
  double resolution_{0.05};
  Pose origin_{};
  std::vector<Occupancy> cells_;
};

/// Free-standing form used throughout the planner and tests.
inline Cell world_to_cell(const OccupancyGrid & grid, const Pose & p)
{
  return grid.world_to_cell(p.x, p.y);
}

// Cells serialise as one string per row ('.' free, '#' occupied), row 0 first
// (i.e. the row touching the origin).
inline void to_json(nlohmann::json & j, const OccupancyGrid & g)
{
  nlohmann::json rows = nlohmann::json::array();
  for (int y = 0; y < g.height(); ++y) {
    std::string row(static_cast<std::size_t>(g.width()), '.');
    for (int x = 0; x < g.width(); ++x) {
      if (g.at({x, y}) == Occupancy::Occupied) {
        row[static_cast<std::size_t>(x)] = '#';
      }
    }
    rows.push_back(std::move(row));
  }
  j = nlohmann::json{
    {"width", g.width()},
    {"height", g.height()},
    {"resolution", g.resolution()},
    {"origin", g.origin()},
    {"cells", std::move(rows)}};
}

inline void from_json(const nlohmann::json & j, OccupancyGrid & g)
{
  const int w = j.at("width").get<int>();
  const int h = j.at("height").get<int>();
  OccupancyGrid out(w, h, j.at("resolution").get<double>(), j.at("origin").get<Pose>());
  const auto & rows = j.at("cells");
  if (!rows.is_array() || static_cast<int>(rows.size()) != h) {
    throw std::invalid_argument("grid: cells must have `height` rows");
  }
  for (int y = 0; y < h; ++y) {
    const auto row = rows[static_cast<std::size_t>(y)].get<std::string>();
    if (static_cast<int>(row.size()) != w) {
      throw std::invalid_argument("grid: row " + std::to_string(y) + " has wrong width");
    }
    for (int x = 0; x < w; ++x) {
      const char c = row[static_cast<std::size_t>(x)];
      if (c == '#') {
        out.set({x, y}, Occupancy::Occupied);
      } else if (c != '.') {
        throw std::invalid_argument("grid: unknown cell character");
      }
    }
  }
  g = std::move(out);
}

}  // namespace emics

#endif  // EMICS__CORE__GRID_HPP_
