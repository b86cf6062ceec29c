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

#ifndef EMICS__OPERATOR__PROFILE_HPP_
#define EMICS__OPERATOR__PROFILE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "emics/core/types.hpp"

namespace emics
{

/// Parameters of a scripted operator.
struct OperatorProfile
{
  std::string name{"default"};
  // skill
  double speed_factor{1.0};          // (0, 1], fraction of max speed the operator drives at
  double heading_noise_sigma{0.0};   // rad, per-command steering noise
  // switch eagerness
  LoaMode preferred_loa{LoaMode::Teleoperation};
  double reaction_delay{1.0};        // s
  double override_probability{0.0};  // [0, 1]
  std::uint64_t seed{0};

  void validate() const
  {
    if (!(speed_factor > 0.0 && speed_factor <= 1.0)) {
      throw std::invalid_argument("profile: speedFactor must be in (0, 1]");
    }
    if (heading_noise_sigma < 0.0 || reaction_delay < 0.0) {
      throw std::invalid_argument("profile: negative sigma or reaction delay");
    }
    if (override_probability < 0.0 || override_probability > 1.0) {
      throw std::invalid_argument("profile: overrideProbability must be in [0, 1]");
    }
  }

  bool operator==(const OperatorProfile &) const = default;
};

inline void to_json(nlohmann::json & j, const OperatorProfile & p)
{
  j = nlohmann::json{
    {"name", p.name},
    {"skill", {{"speedFactor", p.speed_factor}, {"headingNoiseSigma", p.heading_noise_sigma}}},
    {"switchEagerness",
     {{"preferredLoa", to_string(p.preferred_loa)}, {"reactionDelay", p.reaction_delay}}},
    {"overrideProbability", p.override_probability},
    {"seed", p.seed}};
}

inline void from_json(const nlohmann::json & j, OperatorProfile & p)
{
  OperatorProfile out;
  out.name = j.value("name", std::string{"default"});
  if (j.contains("skill")) {
    const auto & s = j.at("skill");
    out.speed_factor = s.value("speedFactor", out.speed_factor);
    out.heading_noise_sigma = s.value("headingNoiseSigma", out.heading_noise_sigma);
  }
  if (j.contains("switchEagerness")) {
    const auto & s = j.at("switchEagerness");
    if (s.contains("preferredLoa")) {
      out.preferred_loa = loa_from_string(s.at("preferredLoa").get<std::string>());
    }
    out.reaction_delay = s.value("reactionDelay", out.reaction_delay);
  }
  out.override_probability = j.value("overrideProbability", out.override_probability);
  out.seed = j.value("seed", out.seed);
  out.validate();
  p = std::move(out);
}

}  // namespace emics

#endif  // EMICS__OPERATOR__PROFILE_HPP_
