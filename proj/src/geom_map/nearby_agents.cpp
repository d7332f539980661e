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

#include "lanepred/geom_map/nearby_agents.hpp"

#include <limits>

namespace lanepred::geom
{

std::optional<std::size_t> select_nearby_agent(
  const LaneCandidate & lane, std::span<const AgentPast> agents, double target_arclength,
  const CandidateConfig & cfg)
{
  std::optional<std::size_t> best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (agents[a].past.empty()) {
      continue;
    }
    const Point2 & present = agents[a].past.back();
    if (point_to_lane_distance(present, lane) > cfg.agent_lateral_range_m) {
      continue;
    }
    const double along = project_onto_polyline(lane.points, present).arclength;
    const double gap = along - target_arclength;
    if (gap > 0.0 && gap < best_gap) {
      best = a;
      best_gap = gap;
    }
  }
  return best;
}

std::optional<std::size_t> closest_lane(
  const Point2 & p, const std::vector<std::span<const Point2>> & lanes, double range)
{
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < lanes.size(); ++n) {
    const double d = point_to_lane_distance(p, lanes[n]);
    if (d <= range && d < best_d) {
      best = n;
      best_d = d;
    }
  }
  return best;
}

}  // namespace lanepred::geom
