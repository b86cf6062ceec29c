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
#include <random>

#include <gtest/gtest.h>

#include "emics/planner/expert.hpp"
#include "oracles/path_oracle.hpp"

using namespace emics;
using namespace emics::planner;

namespace
{

struct RandomGrid
{
  OccupancyGrid grid;
  oracle::BoolGrid blocked;
};

RandomGrid random_grid(std::mt19937_64 & rng, int w, int h, double density)
{
  std::bernoulli_distribution occ(density);
  RandomGrid out{OccupancyGrid(w, h, 1.0), oracle::BoolGrid(h, std::vector<bool>(w, false))};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (occ(rng) && !(x == 0 && y == 0)) {
        out.grid.set({x, y}, Occupancy::Occupied);
        out.blocked[y][x] = true;
      }
    }
  }
  return out;
}

Path straight(double x0, double y0, double x1, double y1)
{
  return Path({{x0, y0, 0.0}, {x1, y1, 0.0}});
}

}  // namespace

TEST(ShortestPath, EmptyGridExamples)
{
  OccupancyGrid g(10, 10, 1.0);
  auto p = shortest_path(g, {0, 0}, {0, 9});
  ASSERT_TRUE(p);
  EXPECT_DOUBLE_EQ(p->cost, 9.0);
  EXPECT_EQ(p->cells.size(), 10u);
  p = shortest_path(g, {0, 0}, {9, 9});
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->cost, 9.0 * std::sqrt(2.0), 1e-12);
}

TEST(ShortestPath, GoalInObstacleIsNoPath)
{
  OccupancyGrid g(10, 10, 1.0);
  g.fill_rect({4.0, 4.0, 7.0, 7.0});
  EXPECT_FALSE(shortest_path(g, {0, 0}, {5, 5}));
}

TEST(ShortestPath, UnreachableIsNoPath)
{
  OccupancyGrid g(10, 10, 1.0);
  g.fill_rect({5.0, 0.0, 6.0, 10.0});
  EXPECT_FALSE(shortest_path(g, {0, 0}, {9, 9}));
}

TEST(ShortestPath, MatchesBfsOracleOnRandomGrids)
{
  std::mt19937_64 rng(2024);
  int reachable = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto rg = random_grid(rng, 20, 20, 0.3);
    const int gx = static_cast<int>(rng() % 20);
    const int gy = static_cast<int>(rng() % 20);
    const auto expected = oracle::bfs_cost(rg.blocked, 0, 0, gx, gy);
    const auto got = shortest_path(rg.grid, {0, 0}, {gx, gy}, Connectivity::Four);
    ASSERT_EQ(expected.has_value(), got.has_value()) << trial;
    if (expected) {
      ++reachable;
      ASSERT_EQ(got->cost, static_cast<double>(*expected)) << trial;
    }
  }
  EXPECT_GT(reachable, 20);
}

TEST(ShortestPath, EightConnectedMatchesRelaxationOracle)
{
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    auto rg = random_grid(rng, 12, 12, 0.25);
    const int gx = static_cast<int>(rng() % 12);
    const int gy = static_cast<int>(rng() % 12);
    const auto expected = oracle::relaxation_cost(rg.blocked, 0, 0, gx, gy);
    const auto got = shortest_path(rg.grid, {0, 0}, {gx, gy}, Connectivity::Eight);
    ASSERT_EQ(expected.has_value(), got.has_value()) << trial;
    if (expected) {
      ASSERT_NEAR(got->cost, *expected, 1e-9) << trial;
    }
  }
}

TEST(ShortestPath, PathIsContiguousAndFree)
{
  std::mt19937_64 rng(5);
  auto rg = random_grid(rng, 30, 30, 0.2);
  rg.grid.set({29, 29}, Occupancy::Free);
  const auto p = shortest_path(rg.grid, {0, 0}, {29, 29});
  ASSERT_TRUE(p);
  for (std::size_t i = 1; i < p->cells.size(); ++i) {
    EXPECT_LE(std::abs(p->cells[i].x - p->cells[i - 1].x), 1);
    EXPECT_LE(std::abs(p->cells[i].y - p->cells[i - 1].y), 1);
    EXPECT_FALSE(rg.grid.occupied(p->cells[i]));
  }
}

TEST(ShortestPath, Deterministic)
{
  OccupancyGrid g(15, 15, 1.0);
  const auto a = shortest_path(g, {0, 0}, {14, 5});
  const auto b = shortest_path(g, {0, 0}, {14, 5});
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->cells, b->cells);
}

TEST(PlanGlobal, InflationBlocksNarrowGap)
{
  OccupancyGrid g(40, 20, 0.1);
  g.fill_rect({2.0, 0.0, 2.1, 0.9});
  g.fill_rect({2.0, 1.2, 2.1, 2.0});  // 0.3 m gap
  PlannerConfig cfg;
  EXPECT_FALSE(plan_global(g, {0.5, 1.0, 0.0}, {3.5, 1.0, 0.0}, cfg));
  cfg.inflation_radius = 0.1;
  const auto route = plan_global(g, {0.5, 1.0, 0.0}, {3.5, 1.0, 0.0}, cfg);
  ASSERT_TRUE(route);
  EXPECT_NEAR(route->path.back().x, 3.5, 1e-12);
  EXPECT_NEAR(route->path.points().front().x, 0.5, 1e-12);
}

TEST(PlanGlobal, ShortcutKeepsPathCollisionFree)
{
  OccupancyGrid g(50, 50, 0.1);
  g.fill_rect({2.0, 0.0, 2.2, 3.5});
  PlannerConfig cfg;
  const auto inflated = g.inflated(cfg.inflation_radius);
  const auto route = plan_on(inflated, {0.5, 0.5, 0.0}, {4.5, 0.5, 0.0});
  ASSERT_TRUE(route);
  const auto & pts = route->path.points();
  EXPECT_LT(pts.size(), route->grid_path.cells.size());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    for (int k = 0; k <= 50; ++k) {
      const double x = pts[i - 1].x + (pts[i].x - pts[i - 1].x) * k / 50.0;
      const double y = pts[i - 1].y + (pts[i].y - pts[i - 1].y) * k / 50.0;
      ASSERT_FALSE(g.occupied_at(x, y));
    }
  }
}

TEST(SuggestSpeed, Examples)
{
  PlannerConfig cfg;
  const Path p = straight(0.0, 0.0, 20.0, 0.0);
  RobotState at_goal{{19.95, 0.0, 0.0}, {0.2, 0.0}};
  EXPECT_EQ(suggest_speed(p, at_goal, cfg).s_expert, 0.0);
  RobotState at_rest{{0.0, 0.0, 0.0}, {0.0, 0.0}};
  EXPECT_DOUBLE_EQ(suggest_speed(p, at_rest, cfg).s_expert, 0.1);
  RobotState cruising{{5.0, 0.0, 0.0}, {0.4, 0.0}};
  EXPECT_DOUBLE_EQ(suggest_speed(p, cruising, cfg).s_expert, 0.4);
}

TEST(SuggestSpeed, StoppingProfileNearGoal)
{
  PlannerConfig cfg;
  const Path p = straight(0.0, 0.0, 10.0, 0.0);
  RobotState s{{9.75, 0.0, 0.0}, {0.4, 0.0}};
  EXPECT_NEAR(suggest_speed(p, s, cfg).s_expert, std::sqrt(2.0 * cfg.decel() * 0.25), 1e-12);
  EXPECT_NEAR(suggest_speed(p, s, cfg).distance_to_goal, 0.25, 1e-12);
}

TEST(SuggestSpeed, SlowsForCorners)
{
  PlannerConfig cfg;
  const Path p({{0.0, 0.0, 0.0}, {5.0, 0.0, 0.0}, {5.0, 5.0, 0.0}});
  RobotState s{{4.5, 0.0, 0.0}, {0.4, 0.0}};
  const double v = suggest_speed(p, s, cfg).s_expert;
  EXPECT_NEAR(v, 0.4 / (1.0 + 0.5 * std::numbers::pi / 2.0), 1e-9);
}

TEST(SuggestSpeed, ReanchorsWhenOffPath)
{
  PlannerConfig cfg;
  const Path p = straight(0.0, 0.0, 20.0, 0.0);
  RobotState s{{5.0, 3.0, 0.0}, {0.4, 0.0}};
  const auto sug = suggest_speed(p, s, cfg);
  EXPECT_NEAR(sug.distance_to_goal, 15.0 + 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(sug.s_expert, 0.4);
}

TEST(SuggestSpeed, AdmissibleProperty)
{
  PlannerConfig cfg;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.0, 10.0);
  // Forward speeds only: when reversing, the non-negative suggestion can sit
  // more than one step above s_R and the raw-error clamp takes over.
  std::uniform_real_distribution<double> spd(0.0, 0.4);
  const Path p({{0.0, 0.0, 0.0}, {4.0, 0.0, 0.0}, {4.0, 4.0, 0.0}, {8.0, 6.0, 0.0}});
  for (int i = 0; i < 20000; ++i) {
    RobotState s{{pos(rng), pos(rng), 0.0}, {spd(rng), 0.0}};
    const double v = suggest_speed(p, s, cfg).s_expert;
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, cfg.v_max);
    ASSERT_LE(v - s.executed.linear, cfg.accel_step + 1e-15);
  }
}

TEST(ExpertPlanner, FollowingExpertSpeedReachesGoal)
{
  OccupancyGrid g(100, 60, 0.1);
  g.fill_rect({4.0, 0.0, 4.3, 4.0});
  ExpertPlanner expert(g, PlannerConfig{});
  const Pose goal{8.0, 1.0, 0.0};
  RobotState state{{1.0, 1.0, 0.0}, {0.0, 0.0}};
  const double dt = 0.1;
  int ticks = 0;
  double travelled = 0.0;
  for (; ticks < 5000; ++ticks) {
    const auto sug = expert.suggest(state, goal);
    if (distance(state.pose, goal) < expert.config().goal_tolerance) {
      break;
    }
    ASSERT_FALSE(sug.path.empty());
    // ideal robot: slides along the path at exactly the suggested speed
    const auto proj = sug.path.project(state.pose.x, state.pose.y);
    const Pose next = sug.path.point_at(proj.s + sug.s_expert * dt);
    travelled += distance(state.pose, next);
    state.pose = next;
    state.executed.linear = sug.s_expert;
  }
  EXPECT_LT(ticks, 5000);
  EXPECT_GT(travelled, 9.0);  // detour around the wall; straight line is 7 m
}

TEST(ExpertPlanner, PlanDependsOnlyOnStaticInputs)
{
  OccupancyGrid g(60, 40, 0.1);
  g.fill_rect({3.0, 0.0, 3.2, 3.0});
  ExpertPlanner a(g, PlannerConfig{});
  ExpertPlanner b(g, PlannerConfig{});
  const RobotState s{{0.5, 0.5, 0.0}, {0.0, 0.0}};
  const auto sa = a.suggest(s, Pose{5.5, 0.5, 0.0});
  const auto sb = b.suggest(s, Pose{5.5, 0.5, 0.0});
  ASSERT_EQ(sa.path.size(), sb.path.size());
  for (std::size_t i = 0; i < sa.path.size(); ++i) {
    EXPECT_EQ(sa.path.points()[i], sb.path.points()[i]);
  }
}

TEST(ExpertPlanner, NoGoalOrNoPathMeansZeroSpeed)
{
  OccupancyGrid g(40, 40, 0.1);
  g.fill_rect({2.0, 0.0, 2.2, 4.0});
  ExpertPlanner expert(g, PlannerConfig{});
  const RobotState s{{0.5, 0.5, 0.0}, {0.2, 0.0}};
  EXPECT_EQ(expert.suggest(s, std::nullopt).s_expert, 0.0);
  EXPECT_EQ(expert.suggest(s, Pose{3.5, 0.5, 0.0}).s_expert, 0.0);
}
