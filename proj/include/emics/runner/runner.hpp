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

#ifndef EMICS__RUNNER__RUNNER_HPP_
#define EMICS__RUNNER__RUNNER_HPP_

#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/run_log.hpp"
#include "emics/core/scenario.hpp"
#include "emics/core/types.hpp"
#include "emics/operator/models.hpp"
#include "emics/operator/profile.hpp"
#include "emics/planner/expert.hpp"
#include "emics/sim/simulation.hpp"

namespace emics::runner
{

inline constexpr double kTimeoutFactor = 4.0;

/// Length of the static-map route through every goal, divided by v_max.
inline double expert_traversal_time(const Scenario & s, const planner::PlannerConfig & cfg)
{
  const OccupancyGrid inflated = s.static_map.inflated(cfg.inflation_radius);
  double length = 0.0;
  Pose from = s.start;
  for (const Pose & g : s.goals) {
    auto route = planner::plan_on(inflated, from, g);
    length += route ? route->path.length() : distance(from, g);
    from = g;
  }
  return length / cfg.v_max;
}

inline double run_timeout(const Scenario & s, const planner::PlannerConfig & cfg)
{
  return s.timeout ? *s.timeout : kTimeoutFactor * expert_traversal_time(s, cfg);
}

/// Looks a profile up in the scenario; "default" falls back to the built-in one.
inline OperatorProfile resolve_profile(const Scenario & s, const std::string & name)
{
  const auto it = s.profiles.find(name);
  if (it != s.profiles.end()) {
    OperatorProfile p = it->second;
    p.name = name;
    return p;
  }
  if (name == "default") {
    return OperatorProfile{};
  }
  throw std::invalid_argument("scenario '" + s.id + "' has no profile '" + name + "'");
}

struct RunRequest
{
  ControlMode mode{ControlMode::PureTeleop};
  std::string profile{"default"};
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  sim::RunConfig config;
};

inline nlohmann::json config_snapshot(const sim::RunConfig & cfg, double timeout, LoaMode initial)
{
  nlohmann::json j = cfg;
  j["timeout"] = timeout;
  j["initialLoa"] = to_string(initial);
  return j;
}

/// Drives one trial to the final goal or the timeout.
inline RunLog run_scenario(Scenario scenario, const RunRequest & req)
{
  if (req.seed) {
    scenario.seed = *req.seed;
  }
  scenario.validate();
  const OperatorProfile profile = resolve_profile(scenario, req.profile);
  const double timeout = run_timeout(scenario, req.config.planner);

  sim::Simulation world(scenario, req.mode, req.config);
  world.set_initial_loa(profile.preferred_loa);
  operators::OperatorModel op(scenario, profile, req.mode, req.config.planner, scenario.seed);

  RunLog log;
  log.scenario_id = scenario.id;
  log.control_mode = req.mode;
  log.seed = scenario.seed;
  log.profile = profile.name;
  log.config = config_snapshot(req.config, timeout, world.loa());
  const long max_ticks = static_cast<long>(std::ceil(timeout * scenario.tick_rate - 1e-9));
  while (world.tick() < max_ticks && !world.done()) {
    const TickInput in = op.act(world.observe());
    log.records.push_back(world.step(in));
  }
  log.complete = world.done();
  log.scenario = std::move(scenario);
  log.switches = collect_switches(log.records);
  return log;
}

inline RunLog run_scenario(const Scenario & scenario, ControlMode mode, const std::string & profile)
{
  RunRequest req;
  req.mode = mode;
  req.profile = profile;
  return run_scenario(scenario, req);
}

/// One log per seed. Trials run concurrently, each with its own world; the
/// result order follows `seeds`.
inline std::vector<RunLog> run_batch(
  const Scenario & scenario, RunRequest req, const std::vector<std::uint64_t> & seeds)
{
  std::vector<std::future<RunLog>> jobs;
  jobs.reserve(seeds.size());
  for (const auto seed : seeds) {
    RunRequest r = req;
    r.seed = seed;
    jobs.push_back(std::async(std::launch::async, [&scenario, r] { return run_scenario(scenario, r); }));
  }
  std::vector<RunLog> out;
  out.reserve(seeds.size());
  for (auto & j : jobs) {
    out.push_back(j.get());
  }
  return out;
}

class ReplayError : public std::runtime_error
{
public:
  explicit ReplayError(const std::string & what) : std::runtime_error(what) {}
};

/// Re-simulates a log from its header and recorded inputs.
inline RunLog replay(const RunLog & log)
{
  sim::RunConfig cfg;
  LoaMode initial = LoaMode::Teleoperation;
  try {
    cfg = log.config.get<sim::RunConfig>();
    initial = loa_from_string(log.config.at("initialLoa").get<std::string>());
  } catch (const std::exception & e) {
    throw ReplayError(std::string{"config in header is unusable: "} + e.what());
  }
  Scenario scenario = log.scenario;
  if (scenario.seed != log.seed) {
    throw ReplayError(
      "seed mismatch: header says " + std::to_string(log.seed) + ", embedded scenario says " +
      std::to_string(scenario.seed));
  }
  sim::Simulation world(scenario, log.control_mode, cfg);
  world.set_initial_loa(initial);
  RunLog out;
  out.scenario_id = log.scenario_id;
  out.control_mode = log.control_mode;
  out.seed = log.seed;
  out.profile = log.profile;
  out.config = log.config;
  out.records.reserve(log.records.size());
  for (const auto & r : log.records) {
    out.records.push_back(world.step(r.input));
  }
  out.complete = world.done();
  out.scenario = std::move(scenario);
  out.switches = collect_switches(out.records);
  return out;
}

struct ReplayReport
{
  bool identical{false};
  std::string diagnostic;
};

/// Parses `text`, replays it and compares the regenerated log byte for byte.
inline ReplayReport replay_and_compare(const std::string & text)
{
  ReplayReport rep;
  RunLog parsed;
  try {
    parsed = parse_log(text);
  } catch (const std::exception & e) {
    rep.diagnostic = std::string{"cannot replay: "} + e.what();
    return rep;
  }
  std::string regenerated;
  try {
    regenerated = serialize_log(replay(parsed));
  } catch (const std::exception & e) {
    rep.diagnostic = e.what();
    return rep;
  }
  if (regenerated == text) {
    rep.identical = true;
    rep.diagnostic = "identical (" + std::to_string(parsed.records.size()) + " records)";
    return rep;
  }
  std::istringstream a(text);
  std::istringstream b(regenerated);
  std::string la;
  std::string lb;
  std::size_t line = 0;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(a, la));
    const bool gb = static_cast<bool>(std::getline(b, lb));
    ++line;
    if (!ga || !gb || la != lb) {
      break;
    }
  }
  rep.diagnostic = line == 1 ? "mismatch in header (seed, config or digest differs from the body)"
                             : "mismatch at record " + std::to_string(line - 2) + " (t = " +
                                 (line - 2 < parsed.records.size()
                                    ? std::to_string(parsed.records[line - 2].t)
                                    : std::string{"?"}) +
                                 ")";
  return rep;
}

}  // namespace emics::runner

#endif  // EMICS__RUNNER__RUNNER_HPP_
