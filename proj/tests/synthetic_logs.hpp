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

#ifndef EMICS__TESTS__SYNTHETIC_LOGS_HPP_
#define EMICS__TESTS__SYNTHETIC_LOGS_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "emics/calibration/calibration.hpp"
#include "emics/core/run_log.hpp"
#include "fixtures.hpp"

namespace synthetic
{

/// Speed trace with a raw error sequence laid out in `errors` (one per tick).
inline emics::RunLog speed_log(const std::vector<double> & errors, double dt = 0.1)
{
  emics::RunLog log;
  log.scenario = fixtures::corridor();
  log.scenario.tick_rate = 1.0 / dt;
  log.scenario_id = "synthetic";
  log.control_mode = emics::ControlMode::HumanInitiative;
  log.seed = log.scenario.seed;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    emics::TickRecord r;
    r.t = static_cast<double>(k) * dt;
    r.s_expert = 0.3;
    r.executed.linear = 0.3 - errors[k];
    r.e_raw = errors[k];
    log.records.push_back(r);
  }
  return log;
}

/// Random error trace: quiet stretches with occasional plateaus of large
/// error of varying height and length.
inline std::vector<double> episode_errors(std::uint64_t seed, double duration = 240.0, double dt = 0.1)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> quiet(0.0, 0.03);
  std::uniform_real_distribution<double> level(0.075, 0.1);
  std::uniform_real_distribution<double> length(1.5, 6.0);
  std::uniform_real_distribution<double> gap(8.0, 20.0);
  std::uniform_real_distribution<double> wobble(-0.004, 0.004);
  const auto n = static_cast<std::size_t>(duration / dt);
  std::vector<double> e(n);
  std::size_t k = 0;
  while (k < n) {
    const auto g = static_cast<std::size_t>(gap(rng) / dt);
    for (std::size_t i = 0; i < g && k < n; ++i, ++k) e[k] = quiet(rng);
    const double lv = level(rng);
    const auto l = static_cast<std::size_t>(length(rng) / dt);
    for (std::size_t i = 0; i < l && k < n; ++i, ++k) e[k] = std::clamp(lv + wobble(rng), 0.0, 0.1);
  }
  return e;
}

/// Plants operator switches where a threshold switcher with (alpha, threshold)
/// would fire, each shifted by uniform jitter in [-jitter, +jitter].
inline emics::RunLog planted_log(std::uint64_t seed, double alpha, double threshold, double jitter)
{
  auto log = speed_log(episode_errors(seed));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> shift(-jitter, jitter);
  const double dt = log.dt();
  emics::LoaMode loa = emics::LoaMode::Teleoperation;
  for (const double t : emics::calibration::propose_switches(log, alpha, threshold)) {
    const double tj = std::max(0.0, t + shift(rng));
    auto & rec = log.records[static_cast<std::size_t>(std::lround(tj / dt))];
    rec.events.push_back(emics::TickEvent::switched(
      {tj, loa, emics::toggled(loa), emics::Initiator::Operator, "planted"}));
    loa = emics::toggled(loa);
  }
  log.switches = emics::collect_switches(log.records);
  return log;
}

}  // namespace synthetic

#endif  // EMICS__TESTS__SYNTHETIC_LOGS_HPP_
