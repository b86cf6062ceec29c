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

#ifndef EMICS__TESTS__FIXTURES_HPP_
#define EMICS__TESTS__FIXTURES_HPP_

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "emics/core/grid.hpp"
#include "emics/core/scenario.hpp"

namespace fixtures
{

/// Empty map with a one-cell wall around the edge.
inline emics::OccupancyGrid walled(double w, double h, double res = 0.1)
{
  const int cw = static_cast<int>(std::lround(w / res));
  const int ch = static_cast<int>(std::lround(h / res));
  emics::OccupancyGrid g(cw, ch, res);
  g.fill_rect({0.0, 0.0, w, res});
  g.fill_rect({0.0, h - res, w, h});
  g.fill_rect({0.0, 0.0, res, h});
  g.fill_rect({w - res, 0.0, w, h});
  return g;
}

/// 12 m x 3 m straight corridor, start at the west end facing east.
inline emics::Scenario corridor()
{
  emics::Scenario s;
  s.id = "corridor";
  s.static_map = walled(12.0, 3.0);
  s.start = {1.0, 1.5, 0.0};
  s.goals = {{11.0, 1.5, 0.0}};
  s.seed = 7;
  return s;
}

/// Two rooms joined by a 1 m doorway at x = 6. With `box`, an unmapped
/// obstacle closes the lower half of the doorway.
inline emics::Scenario doorway(bool box)
{
  emics::Scenario s;
  s.id = box ? "doorway-box" : "doorway";
  s.static_map = walled(12.0, 6.0);
  s.static_map.fill_rect({6.0, 0.0, 6.2, 2.5});
  s.static_map.fill_rect({6.0, 3.5, 6.2, 6.0});
  if (box) {
    s.true_obstacles.push_back({5.5, 2.5, 6.0, 3.0});
  }
  s.start = {1.0, 3.0, 0.0};
  s.goals = {{11.0, 3.0, 0.0}};
  s.seed = 11;
  return s;
}

/// One of the shipped scenarios by file stem.
inline emics::Scenario load(const std::string & name)
{
  std::ifstream in(std::string{EMICS_SCENARIO_DIR} + "/" + name + ".json");
  std::stringstream buf;
  buf << in.rdbuf();
  return emics::parse_scenario(buf.str());
}

}  // namespace fixtures

#endif  // EMICS__TESTS__FIXTURES_HPP_
