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

#ifndef EMICS__CORE__RUN_LOG_HPP_
#define EMICS__CORE__RUN_LOG_HPP_

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/scenario.hpp"
#include "emics/core/types.hpp"

namespace emics
{

inline constexpr int kRunLogVersion = 1;

class MalformedLogError : public std::runtime_error
{
public:
  explicit MalformedLogError(const std::string & what) : std::runtime_error(what) {}
};

struct TickEvent
{
  enum class Kind { Collision, GoalReached, Switch, Denied, DistractionStart, DistractionEnd, Stuck };

  Kind kind{Kind::Collision};
  int goal_index{0};                   // GoalReached; -1 for operator-set goals
  std::optional<LoaSwitchEvent> loa_switch;  // Switch
  std::string reason;                  // Denied

  static TickEvent collision() { return {Kind::Collision, 0, std::nullopt, {}}; }
  static TickEvent goal_reached(int index) { return {Kind::GoalReached, index, std::nullopt, {}}; }
  static TickEvent switched(LoaSwitchEvent e) { return {Kind::Switch, 0, std::move(e), {}}; }
  static TickEvent denied(std::string why) { return {Kind::Denied, 0, std::nullopt, std::move(why)}; }
  static TickEvent distraction_start() { return {Kind::DistractionStart, 0, std::nullopt, {}}; }
  static TickEvent distraction_end() { return {Kind::DistractionEnd, 0, std::nullopt, {}}; }
  static TickEvent stuck() { return {Kind::Stuck, 0, std::nullopt, {}}; }

  bool operator==(const TickEvent &) const = default;
};

inline std::string_view to_string(TickEvent::Kind k)
{
  using K = TickEvent::Kind;
  switch (k) {
    case K::Collision: return "collision";
    case K::GoalReached: return "goalReached";
    case K::Switch: return "switch";
    case K::Denied: return "denied";
    case K::DistractionStart: return "distractionStart";
    case K::DistractionEnd: return "distractionEnd";
    case K::Stuck: return "stuck";
  }
  return "collision";
}

/// Operator-side inputs consumed by one tick. Recorded so a run can be
/// re-simulated without the operator model.
struct TickInput
{
  std::optional<Velocity> teleop;
  bool switch_request{false};
  std::optional<Pose> goal;

  bool operator==(const TickInput &) const = default;
};

struct TickRecord
{
  double t{0.0};
  Pose true_pose;
  Pose estimated_pose;
  Velocity commanded;
  Velocity executed;
  LoaMode loa{LoaMode::Teleoperation};
  double s_expert{0.0};
  double e_raw{0.0};
  double e_filtered{0.0};
  double noise_sigma{0.0};
  std::vector<TickEvent> events;
  TickInput input;

  bool has(TickEvent::Kind k) const
  {
    for (const auto & e : events) {
      if (e.kind == k) return true;
    }
    return false;
  }

  bool operator==(const TickRecord &) const = default;
};

struct RunLog
{
  std::string scenario_id;
  ControlMode control_mode{ControlMode::PureTeleop};
  std::uint64_t seed{0};
  std::string profile;         // operator profile name; "live" for gateway sessions
  nlohmann::json config;       // snapshot of every tunable used
  Scenario scenario;           // scenario as run (after seed override)
  bool complete{false};
  std::vector<TickRecord> records;
  std::vector<LoaSwitchEvent> switches;
  std::string digest;          // as read from a file; empty for fresh logs

  double dt() const { return 1.0 / scenario.tick_rate; }
};

/// Rebuilds `switches` from the per-tick switch events.
inline std::vector<LoaSwitchEvent> collect_switches(const std::vector<TickRecord> & records)
{
  std::vector<LoaSwitchEvent> out;
  for (const auto & r : records) {
    for (const auto & e : r.events) {
      if (e.kind == TickEvent::Kind::Switch && e.loa_switch) {
        out.push_back(*e.loa_switch);
      }
    }
  }
  return out;
}

inline void to_json(nlohmann::json & j, const TickEvent & e)
{
  j = nlohmann::json{{"type", to_string(e.kind)}};
  switch (e.kind) {
    case TickEvent::Kind::GoalReached: j["goal"] = e.goal_index; break;
    case TickEvent::Kind::Switch: j["switch"] = *e.loa_switch; break;
    case TickEvent::Kind::Denied: j["reason"] = e.reason; break;
    default: break;
  }
}

inline void from_json(const nlohmann::json & j, TickEvent & e)
{
  const auto type = j.at("type").get<std::string>();
  using K = TickEvent::Kind;
  if (type == "collision") {
    e = TickEvent::collision();
  } else if (type == "goalReached") {
    e = TickEvent::goal_reached(j.at("goal").get<int>());
  } else if (type == "switch") {
    e = TickEvent::switched(j.at("switch").get<LoaSwitchEvent>());
  } else if (type == "denied") {
    e = TickEvent::denied(j.value("reason", ""));
  } else if (type == "distractionStart") {
    e = TickEvent{K::DistractionStart, 0, std::nullopt, {}};
  } else if (type == "distractionEnd") {
    e = TickEvent{K::DistractionEnd, 0, std::nullopt, {}};
  } else if (type == "stuck") {
    e = TickEvent::stuck();
  } else {
    throw MalformedLogError("unknown event type: " + type);
  }
}

inline void to_json(nlohmann::json & j, const TickInput & in)
{
  j = nlohmann::json{
    {"teleop", in.teleop ? nlohmann::json(*in.teleop) : nlohmann::json(nullptr)},
    {"switchRequest", in.switch_request},
    {"goal", in.goal ? nlohmann::json(*in.goal) : nlohmann::json(nullptr)}};
}

inline void from_json(const nlohmann::json & j, TickInput & in)
{
  in = {};
  if (j.contains("teleop") && !j.at("teleop").is_null()) {
    in.teleop = j.at("teleop").get<Velocity>();
  }
  in.switch_request = j.value("switchRequest", false);
  if (j.contains("goal") && !j.at("goal").is_null()) {
    in.goal = j.at("goal").get<Pose>();
  }
}

inline void to_json(nlohmann::json & j, const TickRecord & r)
{
  j = nlohmann::json{
    {"t", r.t},
    {"truePose", r.true_pose},
    {"estimatedPose", r.estimated_pose},
    {"commanded", r.commanded},
    {"executed", r.executed},
    {"loa", to_string(r.loa)},
    {"sExpert", r.s_expert},
    {"eRaw", r.e_raw},
    {"eFiltered", r.e_filtered},
    {"noiseSigma", r.noise_sigma},
    {"events", r.events},
    {"input", r.input}};
}

inline void from_json(const nlohmann::json & j, TickRecord & r)
{
  try {
    r.t = j.at("t").get<double>();
    r.true_pose = j.at("truePose").get<Pose>();
    r.estimated_pose = j.at("estimatedPose").get<Pose>();
    r.commanded = j.at("commanded").get<Velocity>();
    r.executed = j.at("executed").get<Velocity>();
    r.loa = loa_from_string(j.at("loa").get<std::string>());
    r.s_expert = j.at("sExpert").get<double>();
    r.e_raw = j.at("eRaw").get<double>();
    r.e_filtered = j.at("eFiltered").get<double>();
    r.noise_sigma = j.value("noiseSigma", 0.0);
    r.events = j.value("events", std::vector<TickEvent>{});
    r.input = j.contains("input") ? j.at("input").get<TickInput>() : TickInput{};
  } catch (const nlohmann::json::exception & e) {
    throw MalformedLogError(std::string{"tick record: "} + e.what());
  }
}

/// FNV-1a over the seed and the serialised records. Ties the header to the
/// body so an edited seed or record is caught on replay.
inline std::string log_digest(std::uint64_t seed, const std::string & body)
{
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (int i = 0; i < 8; ++i) {
    mix(static_cast<unsigned char>(seed >> (8 * i)));
  }
  for (char c : body) {
    mix(static_cast<unsigned char>(c));
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

inline std::string serialize_records(const std::vector<TickRecord> & records)
{
  std::string out;
  for (const auto & r : records) {
    out += nlohmann::json(r).dump();
    out += '\n';
  }
  return out;
}

inline nlohmann::json log_header(const RunLog & log, const std::string & body)
{
  return nlohmann::json{
    {"type", "header"},
    {"version", kRunLogVersion},
    {"scenarioId", log.scenario_id},
    {"controlMode", to_string(log.control_mode)},
    {"seed", log.seed},
    {"profile", log.profile},
    {"config", log.config},
    {"scenario", log.scenario},
    {"complete", log.complete},
    {"recordCount", log.records.size()},
    {"digest", log_digest(log.seed, body)}};
}

/// JSON-lines: one header line, then one TickRecord per line.
inline std::string serialize_log(const RunLog & log)
{
  const std::string body = serialize_records(log.records);
  return log_header(log, body).dump() + "\n" + body;
}

inline RunLog parse_log(const std::string & text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw MalformedLogError("empty run log");
  }
  RunLog log;
  std::size_t expected = 0;
  try {
    const auto h = nlohmann::json::parse(line);
    if (h.value("type", "") != "header") {
      throw MalformedLogError("first line is not a header");
    }
    if (h.at("version").get<int>() != kRunLogVersion) {
      throw MalformedLogError("unsupported log version " + std::to_string(h.at("version").get<int>()));
    }
    log.scenario_id = h.at("scenarioId").get<std::string>();
    log.control_mode = control_mode_from_string(h.at("controlMode").get<std::string>());
    log.seed = h.at("seed").get<std::uint64_t>();
    log.profile = h.value("profile", "");
    log.config = h.at("config");
    log.scenario = h.at("scenario").get<Scenario>();
    log.complete = h.at("complete").get<bool>();
    expected = h.at("recordCount").get<std::size_t>();
    log.digest = h.value("digest", "");
  } catch (const nlohmann::json::exception & e) {
    throw MalformedLogError(std::string{"bad header: "} + e.what());
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    try {
      log.records.push_back(nlohmann::json::parse(line).get<TickRecord>());
    } catch (const nlohmann::json::parse_error & e) {
      throw MalformedLogError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (log.records.size() != expected) {
    throw MalformedLogError(
      "truncated log: header promises " + std::to_string(expected) + " records, found " +
      std::to_string(log.records.size()));
  }
  const double dt = log.dt();
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    if (log.records[i].t != static_cast<double>(i) * dt) {
      throw MalformedLogError("record " + std::to_string(i) + " breaks the constant tick spacing");
    }
  }
  log.switches = collect_switches(log.records);
  return log;
}

}  // namespace emics

#endif  // EMICS__CORE__RUN_LOG_HPP_
