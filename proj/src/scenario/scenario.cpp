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

#include "lanepred/scenario/scenario.hpp"

#include <algorithm>

namespace lanepred::scenario
{

const AgentTrack * Scenario::find_agent(const std::string & id) const
{
  const auto it = std::find_if(
    agents.begin(), agents.end(), [&id](const AgentTrack & a) { return a.id == id; });
  return it == agents.end() ? nullptr : &*it;
}

std::optional<geom::Polyline> track_window(
  const AgentTrack & track, std::int64_t first_step, int count)
{
  const auto it = std::lower_bound(
    track.states.begin(), track.states.end(), first_step,
    [](const AgentState & s, std::int64_t step) { return s.step < step; });
  if (it == track.states.end() || it->step != first_step) {
    return std::nullopt;
  }
  const auto offset = static_cast<std::size_t>(it - track.states.begin());
  if (offset + static_cast<std::size_t>(count) > track.states.size()) {
    return std::nullopt;
  }
  geom::Polyline out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto & st = track.states[offset + static_cast<std::size_t>(i)];
    if (st.step != first_step + i) {
      return std::nullopt;
    }
    out.push_back({st.x, st.y});
  }
  return out;
}

void validate_scenario(const Scenario & s, int past_len, int future_len)
{
  if (!(s.sample_rate_hz > 0.0)) {
    throw ScenarioError("sample_rate_hz", "must be positive");
  }
  for (const auto & agent : s.agents) {
    for (std::size_t i = 1; i < agent.states.size(); ++i) {
      if (agent.states[i].step <= agent.states[i - 1].step) {
        throw ScenarioError("agents", "steps of agent '" + agent.id + "' are not increasing");
      }
    }
  }
  const AgentTrack * target = s.find_agent(s.target_agent_id);
  if (target == nullptr) {
    throw ScenarioError("target_agent_id", "'" + s.target_agent_id + "' is not among agents");
  }
  if (!track_window(*target, s.present_step - past_len + 1, past_len)) {
    throw ScenarioError(
      "present_step", "target lacks " + std::to_string(past_len) + " past observations");
  }
  if (!track_window(*target, s.present_step + 1, future_len)) {
    throw ScenarioError(
      "present_step", "target lacks " + std::to_string(future_len) + " future observations");
  }
}

}  // namespace lanepred::scenario
