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

#ifndef EMICS__CORE__SCENARIO_HPP_
#define EMICS__CORE__SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/grid.hpp"
#include "emics/core/types.hpp"
#include "emics/operator/profile.hpp"

namespace emics
{

struct NoiseRegion
{
  Rect region;
  double sigma{0.0};  // m, std-dev added to every laser range inside the region

  bool operator==(const NoiseRegion &) const = default;
};

struct LatencyRegion
{
  Rect region;
  double delay{0.0};  // s

  bool operator==(const LatencyRegion &) const = default;
};

/// Operator unavailability. Triggered either at a fixed time or the first time
/// the robot enters `region`.
struct DistractionWindow
{
  std::optional<double> start_time;
  std::optional<Rect> region;
  double duration{0.0};

  bool operator==(const DistractionWindow &) const = default;
};

/// Off-path point a teleoperating operator visits before heading to goal
/// `before_goal`, pausing for `dwell` seconds. The expert is never told.
struct ExplorationPoint
{
  Pose point;
  int before_goal{0};
  double dwell{0.0};

  bool operator==(const ExplorationPoint &) const = default;
};

struct Scenario
{
  std::string id{"scenario"};
  OccupancyGrid static_map;
  std::vector<Rect> true_obstacles;
  std::vector<NoiseRegion> noise_regions;
  std::vector<LatencyRegion> latency_regions;
  std::vector<DistractionWindow> distraction_windows;
  std::vector<ExplorationPoint> exploration_points;
  Pose start;
  std::vector<Pose> goals;
  std::uint64_t seed{0};
  double tick_rate{10.0};
  std::optional<double> timeout;  // s; defaults to 4x the expert traversal time
  std::map<std::string, OperatorProfile> profiles;

  double dt() const { return 1.0 / tick_rate; }

  double total_distraction() const
  {
    double total = 0.0;
    for (const auto & w : distraction_windows) {
      total += w.duration;
    }
    return total;
  }

  void validate() const
  {
    if (!(tick_rate > 0.0)) {
      throw std::invalid_argument("scenario: tickRate must be > 0");
    }
    if (goals.empty()) {
      throw std::invalid_argument("scenario: at least one goal required");
    }
    auto free_at = [&](const Pose & p, const char * what) {
      const Cell c = world_to_cell(static_map, p);  // throws OutOfMapError
      if (static_map.at(c) != Occupancy::Free) {
        throw std::invalid_argument(std::string{"scenario: "} + what + " lies in an occupied cell");
      }
    };
    free_at(start, "start");
    for (const auto & g : goals) {
      free_at(g, "goal");
    }
    for (const auto & w : distraction_windows) {
      if (w.start_time.has_value() == w.region.has_value()) {
        throw std::invalid_argument("scenario: distraction needs exactly one of startTime/region");
      }
      if (w.duration < 0.0) {
        throw std::invalid_argument("scenario: negative distraction duration");
      }
    }
    for (const auto & [name, p] : profiles) {
      (void)name;
      p.validate();
    }
  }

  bool operator==(const Scenario &) const = default;
};

inline void to_json(nlohmann::json & j, const NoiseRegion & r)
{
  j = nlohmann::json{{"region", r.region}, {"sigma", r.sigma}};
}

inline void from_json(const nlohmann::json & j, NoiseRegion & r)
{
  r.region = j.at("region").get<Rect>();
  r.sigma = j.at("sigma").get<double>();
  if (r.sigma < 0.0) {
    throw std::invalid_argument("noise region: negative sigma");
  }
}

inline void to_json(nlohmann::json & j, const LatencyRegion & r)
{
  j = nlohmann::json{{"region", r.region}, {"delay", r.delay}};
}

inline void from_json(const nlohmann::json & j, LatencyRegion & r)
{
  r.region = j.at("region").get<Rect>();
  r.delay = j.at("delay").get<double>();
  if (r.delay < 0.0) {
    throw std::invalid_argument("latency region: negative delay");
  }
}

inline void to_json(nlohmann::json & j, const DistractionWindow & w)
{
  j = nlohmann::json{{"duration", w.duration}};
  j["startTime"] = w.start_time ? nlohmann::json(*w.start_time) : nlohmann::json(nullptr);
  j["region"] = w.region ? nlohmann::json(*w.region) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json & j, DistractionWindow & w)
{
  w.duration = j.at("duration").get<double>();
  w.start_time.reset();
  w.region.reset();
  if (j.contains("startTime") && !j.at("startTime").is_null()) {
    w.start_time = j.at("startTime").get<double>();
  }
  if (j.contains("region") && !j.at("region").is_null()) {
    w.region = j.at("region").get<Rect>();
  }
}

inline void to_json(nlohmann::json & j, const ExplorationPoint & e)
{
  j = nlohmann::json{{"point", e.point}, {"beforeGoal", e.before_goal}, {"dwell", e.dwell}};
}

inline void from_json(const nlohmann::json & j, ExplorationPoint & e)
{
  e.point = j.at("point").get<Pose>();
  e.before_goal = j.value("beforeGoal", 0);
  e.dwell = j.value("dwell", 0.0);
}

inline void to_json(nlohmann::json & j, const Scenario & s)
{
  j = nlohmann::json{
    {"id", s.id},
    {"staticMap", s.static_map},
    {"trueObstacles", s.true_obstacles},
    {"noiseRegions", s.noise_regions},
    {"latencyRegions", s.latency_regions},
    {"distractionWindows", s.distraction_windows},
    {"explorationPoints", s.exploration_points},
    {"start", s.start},
    {"goals", s.goals},
    {"seed", s.seed},
    {"tickRate", s.tick_rate},
    {"timeout", s.timeout ? nlohmann::json(*s.timeout) : nlohmann::json(nullptr)},
    {"profiles", s.profiles}};
}

template <typename T>
std::vector<T> optional_list(const nlohmann::json & j, const char * key)
{
  if (!j.contains(key) || j.at(key).is_null()) {
    return {};
  }
  return j.at(key).get<std::vector<T>>();
}

inline void from_json(const nlohmann::json & j, Scenario & s)
{
  Scenario out;
  out.id = j.value("id", std::string{"scenario"});
  out.static_map = j.at("staticMap").get<OccupancyGrid>();
  out.true_obstacles = optional_list<Rect>(j, "trueObstacles");
  out.noise_regions = optional_list<NoiseRegion>(j, "noiseRegions");
  out.latency_regions = optional_list<LatencyRegion>(j, "latencyRegions");
  out.distraction_windows = optional_list<DistractionWindow>(j, "distractionWindows");
  out.exploration_points = optional_list<ExplorationPoint>(j, "explorationPoints");
  out.start = j.at("start").get<Pose>();
  out.start.theta = normalize_angle(out.start.theta);
  out.goals = j.at("goals").get<std::vector<Pose>>();
  out.seed = j.value("seed", std::uint64_t{0});
  out.tick_rate = j.value("tickRate", 10.0);
  if (j.contains("timeout") && !j.at("timeout").is_null()) {
    out.timeout = j.at("timeout").get<double>();
  }
  if (j.contains("profiles") && !j.at("profiles").is_null()) {
    out.profiles = j.at("profiles").get<std::map<std::string, OperatorProfile>>();
  }
  out.validate();
  s = std::move(out);
}

inline std::string serialize_scenario(const Scenario & s)
{
  return nlohmann::json(s).dump(2) + "\n";
}

inline Scenario parse_scenario(const std::string & text)
{
  return nlohmann::json::parse(text).get<Scenario>();
}

}  // namespace emics

#endif  // EMICS__CORE__SCENARIO_HPP_
