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

#ifndef EMICS__SIM__LATENCY_HPP_
#define EMICS__SIM__LATENCY_HPP_

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <vector>

#include "emics/core/scenario.hpp"
#include "emics/core/types.hpp"

namespace emics::sim
{

/// Command channel delay. An empty slot (no command issued) travels through
/// the queue like a command so operator silence is delayed too.
class LatencyQueue
{
public:
  using Slot = std::optional<Velocity>;

  /// Queues `cmd` issued at tick `tick` for delivery `delay_ticks` later.
  void push(long tick, Slot cmd, long delay_ticks)
  {
    queue_.push_back({tick + std::max(0L, delay_ticks), cmd});
  }

  /// Pops everything due at `tick`, front first; returns the newest popped
  /// slot, or nothing if no entry was due. An entry never overtakes the one
  /// ahead of it.
  std::optional<Slot> pop_due(long tick)
  {
    std::optional<Slot> last;
    while (!queue_.empty() && queue_.front().due <= tick) {
      last = queue_.front().cmd;
      queue_.pop_front();
    }
    return last;
  }

  std::size_t size() const { return queue_.size(); }
  void clear() { queue_.clear(); }

private:
  struct Entry
  {
    long due;
    Slot cmd;
  };
  std::deque<Entry> queue_;
};

/// Delay in seconds at (x, y); the largest among overlapping regions.
inline double latency_at(const std::vector<LatencyRegion> & regions, double x, double y)
{
  double d = 0.0;
  for (const auto & r : regions) {
    if (r.region.contains(x, y)) {
      d = std::max(d, r.delay);
    }
  }
  return d;
}

inline double noise_at(const std::vector<NoiseRegion> & regions, double x, double y)
{
  double s = 0.0;
  for (const auto & r : regions) {
    if (r.region.contains(x, y)) {
      s = std::max(s, r.sigma);
    }
  }
  return s;
}

inline long delay_ticks(double delay, double tick_rate)
{
  return std::lround(delay * tick_rate);
}

}  // namespace emics::sim

#endif  // EMICS__SIM__LATENCY_HPP_
