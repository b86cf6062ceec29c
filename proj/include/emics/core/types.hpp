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

#ifndef EMICS__CORE__TYPES_HPP_
#define EMICS__CORE__TYPES_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace emics
{

/// Robot speed limits shared by the planner, simulator and fuzzy universes.
inline constexpr double kMaxLinearSpeed = 0.4;  // m/s
inline constexpr double kAccelStep = 0.1;       // m/s per command
inline constexpr double kMaxRawError = 0.1;     // m/s

/// Wraps an angle into (-pi, pi]. Throws std::invalid_argument on NaN/inf.
inline double normalize_angle(double theta)
{
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("normalize_angle: non-finite angle");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(theta, two_pi);
  if (r <= -std::numbers::pi) {
    r += two_pi;
  }
  return r;
}

struct Pose
{
  double x{0.0};      // m
  double y{0.0};      // m
  double theta{0.0};  // rad, (-pi, pi]

  bool operator==(const Pose &) const = default;
};

inline double distance(const Pose & a, const Pose & b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Velocity
{
  double linear{0.0};   // m/s
  double angular{0.0};  // rad/s

  bool operator==(const Velocity &) const = default;
};

struct RobotState
{
  Pose pose;
  Velocity executed;
};

enum class LoaMode { Teleoperation, Autonomy };

enum class ControlMode { PureTeleop, PureAutonomy, HumanInitiative, RobotInitiative, MixedInitiative };

enum class Initiator { Operator, Emics };

inline LoaMode toggled(LoaMode m)
{
  return m == LoaMode::Teleoperation ? LoaMode::Autonomy : LoaMode::Teleoperation;
}

inline std::string_view to_string(LoaMode m)
{
  return m == LoaMode::Teleoperation ? "teleoperation" : "autonomy";
}

inline std::string_view to_string(Initiator i)
{
  return i == Initiator::Operator ? "operator" : "emics";
}

inline std::string_view to_string(ControlMode m)
{
  switch (m) {
    case ControlMode::PureTeleop: return "teleop";
    case ControlMode::PureAutonomy: return "autonomy";
    case ControlMode::HumanInitiative: return "hi";
    case ControlMode::RobotInitiative: return "ri";
    case ControlMode::MixedInitiative: return "mi";
  }
  return "teleop";
}

inline LoaMode loa_from_string(std::string_view s)
{
  if (s == "teleoperation") return LoaMode::Teleoperation;
  if (s == "autonomy") return LoaMode::Autonomy;
  throw std::invalid_argument("unknown LOA: " + std::string{s});
}

inline Initiator initiator_from_string(std::string_view s)
{
  if (s == "operator") return Initiator::Operator;
  if (s == "emics") return Initiator::Emics;
  throw std::invalid_argument("unknown initiator: " + std::string{s});
}

inline ControlMode control_mode_from_string(std::string_view s)
{
  if (s == "teleop") return ControlMode::PureTeleop;
  if (s == "autonomy") return ControlMode::PureAutonomy;
  if (s == "hi") return ControlMode::HumanInitiative;
  if (s == "ri") return ControlMode::RobotInitiative;
  if (s == "mi") return ControlMode::MixedInitiative;
  throw std::invalid_argument("unknown control mode: " + std::string{s});
}

/// LOA a trial starts in for a given control mode.
inline LoaMode initial_loa(ControlMode m, LoaMode preferred = LoaMode::Teleoperation)
{
  switch (m) {
    case ControlMode::PureTeleop: return LoaMode::Teleoperation;
    case ControlMode::PureAutonomy: return LoaMode::Autonomy;
    default: return preferred;
  }
}

struct LoaSwitchEvent
{
  double t{0.0};
  LoaMode from{LoaMode::Teleoperation};
  LoaMode to{LoaMode::Autonomy};
  Initiator initiator{Initiator::Operator};
  std::string reason;

  bool operator==(const LoaSwitchEvent &) const = default;
};

struct Rect
{
  double min_x{0.0};
  double min_y{0.0};
  double max_x{0.0};
  double max_y{0.0};

  bool contains(double x, double y) const
  {
    return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
  }

  bool operator==(const Rect &) const = default;
};

// JSON mappings. Keys are lowerCamelCase throughout the file formats.

inline void to_json(nlohmann::json & j, const Pose & p)
{
  j = nlohmann::json{{"x", p.x}, {"y", p.y}, {"theta", p.theta}};
}

inline void from_json(const nlohmann::json & j, Pose & p)
{
  p.x = j.at("x").get<double>();
  p.y = j.at("y").get<double>();
  p.theta = j.contains("theta") ? j.at("theta").get<double>() : 0.0;
}

inline void to_json(nlohmann::json & j, const Velocity & v)
{
  j = nlohmann::json{{"linear", v.linear}, {"angular", v.angular}};
}

inline void from_json(const nlohmann::json & j, Velocity & v)
{
  v.linear = j.at("linear").get<double>();
  v.angular = j.at("angular").get<double>();
}

inline void to_json(nlohmann::json & j, const Rect & r)
{
  j = nlohmann::json{{"minX", r.min_x}, {"minY", r.min_y}, {"maxX", r.max_x}, {"maxY", r.max_y}};
}

inline void from_json(const nlohmann::json & j, Rect & r)
{
  r.min_x = j.at("minX").get<double>();
  r.min_y = j.at("minY").get<double>();
  r.max_x = j.at("maxX").get<double>();
  r.max_y = j.at("maxY").get<double>();
  if (r.min_x > r.max_x || r.min_y > r.max_y) {
    throw std::invalid_argument("rectangle with min > max");
  }
}

inline void to_json(nlohmann::json & j, const LoaSwitchEvent & e)
{
  j = nlohmann::json{
    {"t", e.t},
    {"from", to_string(e.from)},
    {"to", to_string(e.to)},
    {"initiator", to_string(e.initiator)},
    {"reason", e.reason}};
}

inline void from_json(const nlohmann::json & j, LoaSwitchEvent & e)
{
  e.t = j.at("t").get<double>();
  e.from = loa_from_string(j.at("from").get<std::string>());
  e.to = loa_from_string(j.at("to").get<std::string>());
  e.initiator = initiator_from_string(j.at("initiator").get<std::string>());
  e.reason = j.value("reason", "");
  if (e.from == e.to) {
    throw std::invalid_argument("switch event with from == to");
  }
}

}  // namespace emics

#endif  // EMICS__CORE__TYPES_HPP_
