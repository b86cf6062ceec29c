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

#ifndef EMICS__GATEWAY__PROTOCOL_HPP_
#define EMICS__GATEWAY__PROTOCOL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/grid.hpp"
#include "emics/core/run_log.hpp"
#include "emics/core/types.hpp"
#include "emics/runner/metrics.hpp"
#include "emics/sim/laser.hpp"
#include "emics/switchers/switchers.hpp"

namespace emics::gateway
{

class ProtocolError : public std::invalid_argument
{
public:
  explicit ProtocolError(const std::string & what) : std::invalid_argument(what) {}
};

struct TeleopMsg
{
  Velocity cmd;
};

struct SetGoalMsg
{
  double x{0.0};
  double y{0.0};
};

struct SwitchLoaMsg
{
};

using ClientMessage = std::variant<TeleopMsg, SetGoalMsg, SwitchLoaMsg>;

namespace detail
{

inline double finite_number(const nlohmann::json & j, const char * key)
{
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ProtocolError(std::string{"field '"} + key + "' must be a number");
  }
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) {
    throw ProtocolError(std::string{"field '"} + key + "' must be finite");
  }
  return v;
}

inline double rounded(double v, double unit = 1e-3)
{
  return std::round(v / unit) * unit;
}

}  // namespace detail

inline ClientMessage parse_client_message(const std::string & text)
{
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ProtocolError("message is not a JSON object");
  }
  if (!j.contains("type") || !j.at("type").is_string()) {
    throw ProtocolError("message has no string 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  if (type == "teleop") {
    return TeleopMsg{{detail::finite_number(j, "linear"), detail::finite_number(j, "angular")}};
  }
  if (type == "setGoal") {
    return SetGoalMsg{detail::finite_number(j, "x"), detail::finite_number(j, "y")};
  }
  if (type == "switchLoa") {
    return SwitchLoaMsg{};
  }
  throw ProtocolError("unknown message type '" + type + "'");
}

/// Row-major run lengths starting at row 0 with a free run (possibly empty).
inline std::vector<std::uint32_t> rle_encode(const OccupancyGrid & g)
{
  std::vector<std::uint32_t> runs;
  Occupancy current = Occupancy::Free;
  std::uint32_t n = 0;
  for (const Occupancy c : g.cells()) {
    if (c != current) {
      runs.push_back(n);
      current = c;
      n = 0;
    }
    ++n;
  }
  runs.push_back(n);
  return runs;
}

inline OccupancyGrid rle_decode(
  int width, int height, double resolution, const Pose & origin, const std::vector<std::uint32_t> & runs)
{
  OccupancyGrid g(width, height, resolution, origin);
  std::size_t idx = 0;
  Occupancy v = Occupancy::Free;
  for (const auto n : runs) {
    if (idx + n > g.size()) {
      throw ProtocolError("map runs exceed the grid size");
    }
    for (std::uint32_t i = 0; i < n; ++i, ++idx) {
      g.set(g.cell_of(idx), v);
    }
    v = v == Occupancy::Free ? Occupancy::Occupied : Occupancy::Free;
  }
  if (idx != g.size()) {
    throw ProtocolError("map runs do not cover the grid");
  }
  return g;
}

inline std::string map_digest(const OccupancyGrid & g)
{
  std::string body(g.size(), '0');
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.cells()[i] == Occupancy::Occupied) body[i] = '1';
  }
  const auto dims = (static_cast<std::uint64_t>(g.width()) << 32) | static_cast<std::uint64_t>(g.height());
  return log_digest(dims, body);
}

inline nlohmann::json map_message(const OccupancyGrid & g)
{
  return {
    {"type", "map"},
    {"width", g.width()},
    {"height", g.height()},
    {"resolution", g.resolution()},
    {"origin", g.origin()},
    {"encoding", "rle"},
    {"runs", rle_encode(g)},
    {"digest", map_digest(g)}};
}

inline OccupancyGrid decode_map_message(const nlohmann::json & j)
{
  if (j.value("type", "") != "map" || j.value("encoding", "") != "rle") {
    throw ProtocolError("not an RLE map message");
  }
  return rle_decode(
    j.at("width").get<int>(), j.at("height").get<int>(), j.at("resolution").get<double>(),
    j.at("origin").get<Pose>(), j.at("runs").get<std::vector<std::uint32_t>>());
}

struct FrameLimits
{
  std::size_t max_path_points{60};
  std::size_t max_scan_points{61};
};

/// Keeps evenly spaced points, always including the first and last.
inline std::vector<Pose> downsample(const std::vector<Pose> & pts, std::size_t max_points)
{
  if (pts.size() <= max_points || max_points < 2) {
    return pts;
  }
  std::vector<Pose> out;
  out.reserve(max_points);
  const double step = static_cast<double>(pts.size() - 1) / static_cast<double>(max_points - 1);
  for (std::size_t i = 0; i < max_points; ++i) {
    out.push_back(pts[static_cast<std::size_t>(std::lround(static_cast<double>(i) * step))]);
  }
  return out;
}

/// Laser returns short of max range, in world coordinates.
inline std::vector<Pose> scan_points(const sim::LaserScan & scan, const Pose & pose)
{
  std::vector<Pose> out;
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    if (scan.ranges[i] >= scan.max_range) continue;
    const double a = pose.theta + scan.angles[i];
    out.push_back({pose.x + scan.ranges[i] * std::cos(a), pose.y + scan.ranges[i] * std::sin(a), 0.0});
  }
  return out;
}

struct StateFrame
{
  double t{0.0};
  Pose robot_pose;  // estimated
  double speed{0.0};
  LoaMode loa{LoaMode::Teleoperation};
  ControlMode control_mode{ControlMode::PureTeleop};
  double e_filtered{0.0};
  std::optional<Pose> goal;
  std::vector<Pose> planned_path;
  std::vector<Pose> scan_points;
  std::string map_digest;
};

inline nlohmann::json frame_message(const StateFrame & f, const FrameLimits & lim = {})
{
  using detail::rounded;
  const auto xy = [](const std::vector<Pose> & pts, std::size_t n) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto & p : downsample(pts, n)) {
      a.push_back({rounded(p.x), rounded(p.y)});
    }
    return a;
  };
  return {
    {"type", "frame"},
    {"t", f.t},
    {"robotPose",
     {{"x", rounded(f.robot_pose.x, 1e-4)},
      {"y", rounded(f.robot_pose.y, 1e-4)},
      {"theta", rounded(f.robot_pose.theta, 1e-4)}}},
    {"speed", rounded(f.speed, 1e-4)},
    {"loa", to_string(f.loa)},
    {"controlMode", to_string(f.control_mode)},
    {"eFiltered", f.e_filtered},
    {"goal", f.goal ? nlohmann::json{{"x", f.goal->x}, {"y", f.goal->y}} : nlohmann::json(nullptr)},
    {"plannedPath", xy(f.planned_path, lim.max_path_points)},
    {"scanPoints", xy(f.scan_points, lim.max_scan_points)},
    {"mapDigest", f.map_digest}};
}

inline nlohmann::json loa_switch_message(const LoaSwitchEvent & e)
{
  nlohmann::json j = notify(e);
  j["from"] = to_string(e.from);
  return j;
}

inline nlohmann::json denied_message(const std::string & reason)
{
  return {{"type", "denied"}, {"reason", reason}};
}

inline nlohmann::json error_message(const std::string & reason)
{
  return {{"type", "error"}, {"reason", reason}};
}

inline nlohmann::json metrics_message(const runner::Metrics & m)
{
  nlohmann::json j = m;
  j["type"] = "metrics";
  return j;
}

}  // namespace emics::gateway

#endif  // EMICS__GATEWAY__PROTOCOL_HPP_
