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

#ifndef EMICS__PLANNER__DIJKSTRA_HPP_
#define EMICS__PLANNER__DIJKSTRA_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "emics/core/grid.hpp"

namespace emics::planner
{

enum class Connectivity { Four, Eight };

struct GridPath
{
  std::vector<Cell> cells;
  double cost{0.0};  // in cell units; diagonal steps cost sqrt(2)
};

/// Dijkstra over free cells. The start cell is always expandable so a robot
/// sitting inside an inflation margin can still leave it. Diagonal moves may
/// not cut occupied corners. Ties resolve by cell index, so results are
/// deterministic.
inline std::optional<GridPath> shortest_path(
  const OccupancyGrid & grid, Cell start, Cell goal, Connectivity conn = Connectivity::Eight)
{
  if (!grid.in_bounds(start) || !grid.in_bounds(goal) || grid.occupied(goal)) {
    return std::nullopt;
  }
  static constexpr std::array<std::array<int, 2>, 8> kNeighbours{{
    {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  const std::size_t n_moves = conn == Connectivity::Eight ? 8 : 4;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(grid.size(), inf);
  std::vector<std::int64_t> parent(grid.size(), -1);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  const std::size_t s = grid.index(start);
  const std::size_t g = grid.index(goal);
  dist[s] = 0.0;
  open.emplace(0.0, s);
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) {
      continue;
    }
    if (u == g) {
      break;
    }
    const Cell c = grid.cell_of(u);
    for (std::size_t k = 0; k < n_moves; ++k) {
      const Cell nb{c.x + kNeighbours[k][0], c.y + kNeighbours[k][1]};
      if (grid.occupied(nb)) {
        continue;
      }
      double step = 1.0;
      if (k >= 4) {
        if (grid.occupied({c.x + kNeighbours[k][0], c.y}) ||
            grid.occupied({c.x, c.y + kNeighbours[k][1]}))
        {
          continue;
        }
        step = std::numbers::sqrt2;
      }
      const std::size_t v = grid.index(nb);
      const double nd = d + step;
      if (nd < dist[v]) {
        dist[v] = nd;
        parent[v] = static_cast<std::int64_t>(u);
        open.emplace(nd, v);
      }
    }
  }
  if (dist[g] == inf) {
    return std::nullopt;
  }
  GridPath out;
  out.cost = dist[g];
  for (std::int64_t v = static_cast<std::int64_t>(g); v != -1; v = parent[static_cast<std::size_t>(v)]) {
    out.cells.push_back(grid.cell_of(static_cast<std::size_t>(v)));
  }
  std::reverse(out.cells.begin(), out.cells.end());
  return out;
}

/// True if the straight segment between two cell centres crosses only free cells.
inline bool line_of_sight(const OccupancyGrid & grid, Cell a, Cell b)
{
  int x = a.x;
  int y = a.y;
  const int dx = std::abs(b.x - a.x);
  const int dy = std::abs(b.y - a.y);
  const int sx = b.x > a.x ? 1 : -1;
  const int sy = b.y > a.y ? 1 : -1;
  int err = dx - dy;
  while (true) {
    if (!(x == a.x && y == a.y) && grid.occupied({x, y})) {
      return false;
    }
    if (x == b.x && y == b.y) {
      return true;
    }
    const int e2 = 2 * err;
    if (e2 > -dy && e2 < dx) {
      // diagonal step: both side cells must be free (supercover)
      if (grid.occupied({x + sx, y}) || grid.occupied({x, y + sy})) {
        return false;
      }
    }
    if (e2 > -dy) {
      err -= dy;
      x += sx;
    }
    if (e2 < dx) {
      err += dx;
      y += sy;
    }
  }
}

/// Greedy string pulling: keeps a cell only when the next one is not visible
/// from the last kept cell.
inline std::vector<Cell> shortcut(const OccupancyGrid & grid, const std::vector<Cell> & cells)
{
  if (cells.size() <= 2) {
    return cells;
  }
  std::vector<Cell> out{cells.front()};
  std::size_t anchor = 0;
  for (std::size_t i = 2; i < cells.size(); ++i) {
    if (!line_of_sight(grid, cells[anchor], cells[i])) {
      anchor = i - 1;
      out.push_back(cells[anchor]);
    }
  }
  out.push_back(cells.back());
  return out;
}

}  // namespace emics::planner

#endif  // EMICS__PLANNER__DIJKSTRA_HPP_
