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

#ifndef EMICS__RUNNER__METRICS_HPP_
#define EMICS__RUNNER__METRICS_HPP_

#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "emics/core/run_log.hpp"
#include "emics/core/types.hpp"

namespace emics::runner
{

inline constexpr double kCollisionPenalty = 10.0;  // s per collision
inline constexpr double kCollisionGap = 1.0;       // s between distinct contacts

struct Metrics
{
  double completion_time{0.0};
  int collisions{0};
  double score{0.0};
  int switches_total{0};
  int switches_operator{0};
  int switches_emics{0};
  double pct_autonomy{0.0};
  double pct_teleop{0.0};
  double stuck_time{0.0};
  bool complete{false};
};

/// Pure function of the log.
inline Metrics compute_metrics(const RunLog & log)
{
  if (log.records.empty()) {
    throw MalformedLogError("metrics: log has no records");
  }
  Metrics m;
  m.complete = log.complete;
  const double dt = log.dt();
  double last_goal = -1.0;
  double last_contact = -std::numeric_limits<double>::infinity();
  long autonomy = 0;
  long stuck = 0;
  for (const auto & r : log.records) {
    if (r.loa == LoaMode::Autonomy) {
      ++autonomy;
    }
    for (const auto & e : r.events) {
      switch (e.kind) {
        case TickEvent::Kind::GoalReached: last_goal = r.t; break;
        case TickEvent::Kind::Stuck: ++stuck; break;
        case TickEvent::Kind::Collision:
          if (r.t - last_contact > kCollisionGap + 1e-9) {
            ++m.collisions;
          }
          last_contact = r.t;
          break;
        case TickEvent::Kind::Switch:
          ++m.switches_total;
          if (e.loa_switch->initiator == Initiator::Operator) {
            ++m.switches_operator;
          } else {
            ++m.switches_emics;
          }
          break;
        default: break;
      }
    }
  }
  m.completion_time = (log.complete && last_goal >= 0.0) ? last_goal : log.records.back().t;
  m.score = m.completion_time + kCollisionPenalty * m.collisions;
  const double n = static_cast<double>(log.records.size());
  m.pct_autonomy = 100.0 * static_cast<double>(autonomy) / n;
  m.pct_teleop = 100.0 - m.pct_autonomy;
  m.stuck_time = static_cast<double>(stuck) * dt;
  return m;
}

inline std::string metrics_csv_header()
{
  return "scenarioId,mode,seed,completionTime,collisions,score,switchesTotal,switchesOperator,"
         "switchesEmics,pctAutonomy";
}

inline std::string metrics_csv_row(const RunLog & log, const Metrics & m)
{
  std::ostringstream out;
  out << log.scenario_id << ',' << to_string(log.control_mode) << ',' << log.seed << ','
      << std::setprecision(10) << m.completion_time << ',' << m.collisions << ',' << m.score << ','
      << m.switches_total << ',' << m.switches_operator << ',' << m.switches_emics << ','
      << m.pct_autonomy;
  return out.str();
}

inline void to_json(nlohmann::json & j, const Metrics & m)
{
  j = nlohmann::json{
    {"completionTime", m.completion_time}, {"collisions", m.collisions}, {"score", m.score},
    {"switchesTotal", m.switches_total}, {"switchesOperator", m.switches_operator},
    {"switchesEmics", m.switches_emics}, {"pctAutonomy", m.pct_autonomy},
    {"pctTeleop", m.pct_teleop}, {"stuckTime", m.stuck_time}, {"complete", m.complete}};
}

}  // namespace emics::runner

#endif  // EMICS__RUNNER__METRICS_HPP_
