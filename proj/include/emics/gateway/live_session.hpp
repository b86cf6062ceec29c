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

#ifndef EMICS__GATEWAY__LIVE_SESSION_HPP_
#define EMICS__GATEWAY__LIVE_SESSION_HPP_

#include <cmath>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "emics/core/run_log.hpp"
#include "emics/core/scenario.hpp"
#include "emics/gateway/protocol.hpp"
#include "emics/runner/metrics.hpp"
#include "emics/runner/runner.hpp"
#include "emics/sim/simulation.hpp"

namespace emics::gateway
{

struct TickOutput
{
  TickRecord record;
  std::vector<std::string> messages;  // frame first, then notifications
  bool finished{false};
};

/// A simulation driven by operator messages instead of a scripted operator.
/// Messages may arrive from any thread; ticks run on one thread. Everything
/// a tick consumes ends up in the record's input, so the log replays exactly.
class LiveSession
{
public:
  LiveSession(
    Scenario scenario, ControlMode mode, sim::RunConfig cfg = {},
    LoaMode initial = LoaMode::Teleoperation, FrameLimits limits = {})
  : cfg_(cfg), limits_(limits), world_(scenario, mode, cfg)
  {
    world_.set_initial_loa(initial);
    timeout_ = runner::run_timeout(world_.scenario(), cfg.planner);
    max_ticks_ = static_cast<long>(std::ceil(timeout_ * world_.scenario().tick_rate - 1e-9));
    map_digest_ = map_digest(world_.scenario().static_map);
    log_.scenario_id = world_.scenario().id;
    log_.control_mode = mode;
    log_.seed = world_.scenario().seed;
    log_.profile = "live";
    log_.config = runner::config_snapshot(cfg, timeout_, world_.loa());
  }

  const sim::Simulation & world() const { return world_; }
  double timeout() const { return timeout_; }

  std::string map_text() const { return map_message(world_.scenario().static_map).dump(); }

  /// Queues a client message for the next tick boundary. Returns the error
  /// reply for a message that does not parse; nothing is queued in that case.
  std::optional<std::string> submit(const std::string & text)
  {
    ClientMessage msg;
    try {
      msg = parse_client_message(text);
    } catch (const ProtocolError & e) {
      return error_message(e.what()).dump();
    }
    if (const auto * g = std::get_if<SetGoalMsg>(&msg)) {
      if (!world_.scenario().static_map.in_bounds(world_.scenario().static_map.raw_cell(g->x, g->y))) {
        return error_message("goal lies outside the map").dump();
      }
    }
    std::lock_guard<std::mutex> lock(mutex_);
    queue_.push_back(msg);
    return std::nullopt;
  }

  /// The operator link is gone: the latched teleop command drops to zero,
  /// which the acceleration limit turns into a ramp to standstill.
  void disconnect()
  {
    std::lock_guard<std::mutex> lock(mutex_);
    disconnected_ = true;
  }

  /// An operator is back on the link; the robot stays stopped until the
  /// first new teleop message.
  void reconnect()
  {
    std::lock_guard<std::mutex> lock(mutex_);
    disconnected_ = false;
  }

  bool finished() const { return world_.done() || world_.tick() >= max_ticks_; }

  TickOutput tick()
  {
    TickOutput out;
    if (finished()) {
      out.finished = true;
      return out;
    }
    const TickInput in = drain();
    out.record = world_.step(in);
    log_.records.push_back(out.record);
    out.messages.push_back(frame_message(frame(out.record), limits_).dump());
    for (const auto & ev : out.record.events) {
      if (ev.kind == TickEvent::Kind::Switch && ev.loa_switch) {
        out.messages.push_back(loa_switch_message(*ev.loa_switch).dump());
      } else if (ev.kind == TickEvent::Kind::Denied) {
        out.messages.push_back(denied_message(ev.reason).dump());
      }
    }
    if (finished()) {
      out.finished = true;
      out.messages.push_back(metrics_message(runner::compute_metrics(log())).dump());
    }
    return out;
  }

  RunLog log() const
  {
    RunLog l = log_;
    l.complete = world_.done();
    l.scenario = world_.scenario();
    l.switches = collect_switches(l.records);
    return l;
  }

  StateFrame frame(const TickRecord & r) const
  {
    StateFrame f;
    f.t = r.t;
    f.robot_pose = world_.estimated_pose();
    f.speed = world_.executed().linear;
    f.loa = world_.loa();
    f.control_mode = world_.mode();
    f.e_filtered = r.e_filtered;
    f.goal = world_.active_goal();
    const auto & auto_path = world_.autonomy().path();
    const auto & expert_path = world_.expert().path();
    if (world_.loa() == LoaMode::Autonomy && auto_path) {
      f.planned_path = auto_path->points();
    } else if (expert_path) {
      f.planned_path = expert_path->points();
    }
    f.scan_points = scan_points(world_.scan(), world_.estimated_pose());
    f.map_digest = map_digest_;
    return f;
  }

private:
  // Teleop and goal: the newest message wins. One switch request is used per
  // tick; extra presses wait for the following ticks.
  TickInput drain()
  {
    std::lock_guard<std::mutex> lock(mutex_);
    TickInput in;
    bool switched = false;
    std::deque<ClientMessage> carry;
    for (auto & m : queue_) {
      if (const auto * t = std::get_if<TeleopMsg>(&m)) {
        latched_ = t->cmd;
      } else if (const auto * g = std::get_if<SetGoalMsg>(&m)) {
        in.goal = Pose{g->x, g->y, 0.0};
      } else if (!switched) {
        in.switch_request = true;
        switched = true;
      } else {
        carry.push_back(m);
      }
    }
    queue_ = std::move(carry);
    if (disconnected_) {
      latched_ = Velocity{};
    }
    in.teleop = latched_;
    return in;
  }

  sim::RunConfig cfg_;
  FrameLimits limits_;
  sim::Simulation world_;
  double timeout_{0.0};
  long max_ticks_{0};
  std::string map_digest_;
  RunLog log_;

  std::mutex mutex_;
  std::deque<ClientMessage> queue_;
  std::optional<Velocity> latched_;
  bool disconnected_{false};
};

}  // namespace emics::gateway

#endif  // EMICS__GATEWAY__LIVE_SESSION_HPP_
