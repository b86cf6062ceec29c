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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "emics/core/grid.hpp"
#include "emics/core/scenario.hpp"
#include "emics/core/types.hpp"

using namespace emics;

TEST(NormalizeAngle, Examples)
{
  EXPECT_EQ(normalize_angle(0.0), 0.0);
  EXPECT_NEAR(normalize_angle(3.0 * std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_EQ(normalize_angle(-std::numbers::pi), std::numbers::pi);
}

TEST(NormalizeAngle, RejectsNonFinite)
{
  EXPECT_THROW(normalize_angle(std::nan("")), std::invalid_argument);
  EXPECT_THROW(normalize_angle(INFINITY), std::invalid_argument);
}

TEST(NormalizeAngle, RangeAndEquivalenceProperty)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-100.0, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = d(rng);
    const double r = normalize_angle(a);
    ASSERT_GT(r, -std::numbers::pi);
    ASSERT_LE(r, std::numbers::pi);
    const double k = (a - r) / (2.0 * std::numbers::pi);
    ASSERT_NEAR(k, std::round(k), 1e-9);
  }
}

TEST(WorldToCell, Examples)
{
  OccupancyGrid g(20, 20, 0.05);
  EXPECT_EQ(world_to_cell(g, {0.0, 0.0, 0.0}), (Cell{0, 0}));
  EXPECT_EQ(world_to_cell(g, {0.26, 0.11, 0.0}), (Cell{5, 2}));
  EXPECT_THROW(world_to_cell(g, {1.5, 0.2, 0.0}), OutOfMapError);
  EXPECT_THROW(world_to_cell(g, {-0.01, 0.2, 0.0}), OutOfMapError);
}

TEST(WorldToCell, HonoursOrigin)
{
  OccupancyGrid g(10, 10, 0.5, Pose{-2.0, 1.0, 0.0});
  EXPECT_EQ(world_to_cell(g, {-2.0, 1.0, 0.0}), (Cell{0, 0}));
  EXPECT_EQ(world_to_cell(g, {0.1, 3.9, 0.0}), (Cell{4, 5}));
}

TEST(OccupancyGrid, RejectsBadResolution)
{
  EXPECT_THROW(OccupancyGrid(2, 2, 0.0), std::invalid_argument);
  EXPECT_THROW(OccupancyGrid(2, 2, -1.0), std::invalid_argument);
}

TEST(OccupancyGrid, FillRectAndInflate)
{
  OccupancyGrid g(10, 10, 1.0);
  g.fill_rect({4.0, 4.0, 5.0, 5.0});
  EXPECT_TRUE(g.occupied({4, 4}));
  EXPECT_FALSE(g.occupied({5, 5}));
  EXPECT_FALSE(g.occupied({3, 4}));
  const auto inf = g.inflated(1.0);
  EXPECT_TRUE(inf.occupied({3, 4}));
  EXPECT_TRUE(inf.occupied({5, 4}));
  EXPECT_FALSE(inf.occupied({3, 3}));  // diagonal neighbour is sqrt(2) away
  EXPECT_TRUE(g.occupied({-1, 0}));    // outside counts as occupied
}

TEST(OccupancyGrid, DiskCollision)
{
  OccupancyGrid g(10, 10, 0.1);
  g.fill_rect({0.5, 0.0, 0.6, 1.0});
  EXPECT_FALSE(g.disk_collides(0.25, 0.5, 0.2));
  EXPECT_TRUE(g.disk_collides(0.35, 0.5, 0.2));
}

namespace
{

Scenario random_scenario(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Scenario s;
  s.id = "rand" + std::to_string(rng() % 1000);
  s.static_map = OccupancyGrid(30, 20, 0.1 + 0.1 * u(rng), Pose{u(rng), -u(rng), 0.0});
  for (int i = 0; i < 30; ++i) {
    s.static_map.set({static_cast<int>(rng() % 30), static_cast<int>(rng() % 20)}, Occupancy::Occupied);
  }
  // start / goal on guaranteed-free cells
  s.static_map.set({1, 1}, Occupancy::Free);
  s.static_map.set({28, 18}, Occupancy::Free);
  s.start = s.static_map.cell_center({1, 1});
  s.start.theta = normalize_angle(u(rng) * 7.0);
  s.goals = {s.static_map.cell_center({28, 18})};
  s.true_obstacles = {{u(rng), u(rng), 1.0 + u(rng), 1.0 + u(rng)}};
  s.noise_regions = {{{0.0, 0.0, u(rng), u(rng)}, 0.1 * u(rng)}};
  s.latency_regions = {{{0.0, 0.0, 1.0, 1.0}, 0.5}};
  s.distraction_windows = {{30.0 * u(rng), std::nullopt, 10.0}, {std::nullopt, Rect{0, 0, 1, 1}, 5.0}};
  s.exploration_points = {{{0.3, 0.4, 0.0}, 0, 2.0}};
  s.seed = rng();
  s.tick_rate = 10.0;
  if (u(rng) > 0.5) {
    s.timeout = 100.0 * u(rng);
  }
  OperatorProfile p;
  p.name = "p";
  p.speed_factor = 0.5 + 0.5 * u(rng);
  p.override_probability = u(rng);
  p.seed = rng() % 100;
  s.profiles.emplace("p", p);
  return s;
}

}  // namespace

TEST(Scenario, RoundTripIsByteIdenticalProperty)
{
  std::mt19937_64 rng(42);
  for (int i = 0; i < 50; ++i) {
    const Scenario s = random_scenario(rng);
    const std::string a = serialize_scenario(s);
    const Scenario parsed = parse_scenario(a);
    EXPECT_EQ(parsed, s);
    EXPECT_EQ(serialize_scenario(parsed), a);
  }
}

TEST(Scenario, RejectsStartInObstacle)
{
  std::mt19937_64 rng(1);
  Scenario s = random_scenario(rng);
  s.static_map.set({1, 1}, Occupancy::Occupied);
  EXPECT_THROW(parse_scenario(serialize_scenario(s)), std::invalid_argument);
}

TEST(Scenario, RejectsGoalOutsideMap)
{
  std::mt19937_64 rng(2);
  Scenario s = random_scenario(rng);
  s.goals.push_back({1000.0, 0.0, 0.0});
  EXPECT_THROW(s.validate(), OutOfMapError);
}

TEST(Scenario, RejectsAmbiguousDistraction)
{
  std::mt19937_64 rng(3);
  Scenario s = random_scenario(rng);
  s.distraction_windows = {{1.0, Rect{0, 0, 1, 1}, 5.0}};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(SwitchEvent, JsonRejectsNoOpSwitch)
{
  nlohmann::json j = {{"t", 1.0}, {"from", "autonomy"}, {"to", "autonomy"}, {"initiator", "emics"}};
  EXPECT_THROW(j.get<LoaSwitchEvent>(), std::invalid_argument);
}
