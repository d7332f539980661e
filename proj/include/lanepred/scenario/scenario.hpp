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

#ifndef LANEPRED__SCENARIO__SCENARIO_HPP_
#define LANEPRED__SCENARIO__SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lanepred/geom_map/lane_graph.hpp"

namespace lanepred::scenario
{

struct AgentState
{
  std::int64_t step{0};
  double x{0.0};
  double y{0.0};

  friend bool operator==(const AgentState &, const AgentState &) = default;
};

struct AgentTrack
{
  std::string id;
  std::vector<AgentState> states;  // strictly increasing steps

  friend bool operator==(const AgentTrack &, const AgentTrack &) = default;
};

/// One multi-agent log plus the lane graph it was recorded on.
struct Scenario
{
  std::string scenario_id;
  double sample_rate_hz{2.0};
  geom::LaneGraph lanes;
  std::vector<AgentTrack> agents;
  std::string target_agent_id;
  std::int64_t present_step{0};

  const AgentTrack * find_agent(const std::string & id) const;

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// A scenario that violates its invariants.
class ScenarioError : public std::runtime_error
{
public:
  ScenarioError(const std::string & field, const std::string & what)
  : std::runtime_error(field + ": " + what), field_(field)
  {
  }
  const std::string & field() const { return field_; }

private:
  std::string field_;
};

/// Positions at steps [first_step, first_step + count), or nothing if any is missing.
std::optional<geom::Polyline> track_window(
  const AgentTrack & track, std::int64_t first_step, int count);

/// Checks the target exists with `past_len` observations ending at present_step and
/// `future_len` after it, and that every track has strictly increasing steps.
void validate_scenario(const Scenario & s, int past_len, int future_len);

}  // namespace lanepred::scenario

#endif  // LANEPRED__SCENARIO__SCENARIO_HPP_
