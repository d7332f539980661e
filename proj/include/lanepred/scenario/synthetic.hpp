// Copyright 2026 The lanepred Authors
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

#ifndef LANEPRED__SCENARIO__SYNTHETIC_HPP_
#define LANEPRED__SCENARIO__SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lanepred/scenario/scenario.hpp"

namespace lanepred::scenario
{

enum class Topology
{
  kStraight,
  kFork,
  kCurve,
  kMixed,
};

std::string to_string(Topology t);
Topology topology_from_string(const std::string & name);

struct SyntheticConfig
{
  int n_scenarios{100};
  Topology lane_topology{Topology::kMixed};
  double noise_std_m{0.2};
  std::uint64_t seed{0};
  int past_len{4};
  int future_len{12};
  double sample_rate_hz{2.0};
  int max_nearby_agents{4};

  void validate() const;
};

/**
 * @brief Random lane networks with agents driving along them.
 *
 * Every agent follows a lane centerline at piecewise-constant speed; agents
 * entering a turn (a curve or a turning fork branch) drop to a slower speed
 * there. Straight-topology agents keep a single speed. Observed positions carry
 * isotropic Gaussian noise of std noise_std_m. The scene is placed at a random
 * world pose. Output is a pure function of the config.
 */
std::vector<Scenario> generate_synthetic(const SyntheticConfig & cfg);

}  // namespace lanepred::scenario

#endif  // LANEPRED__SCENARIO__SYNTHETIC_HPP_
