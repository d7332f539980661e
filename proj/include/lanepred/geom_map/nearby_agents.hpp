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

#ifndef LANEPRED__GEOM_MAP__NEARBY_AGENTS_HPP_
#define LANEPRED__GEOM_MAP__NEARBY_AGENTS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lanepred/geom_map/lane_candidates.hpp"

namespace lanepred::geom
{

/// Past track of a non-target agent; the last point is its present position.
struct AgentPast
{
  std::string id;
  Polyline past;
};

/**
 * @brief The agent a lane candidate contributes to the encoder.
 *
 * Qualifying agents have a present position within agent_lateral_range_m of the
 * lane (point-set distance) and project further along the lane than
 * `target_arclength`. The one with the smallest arc-length gap wins; ties go
 * to the smaller index. Returns the index into `agents`.
 */
std::optional<std::size_t> select_nearby_agent(
  const LaneCandidate & lane, std::span<const AgentPast> agents, double target_arclength,
  const CandidateConfig & cfg);

/// Index of the lane nearest to p by point-set distance, if any lies within `range`.
std::optional<std::size_t> closest_lane(
  const Point2 & p, const std::vector<std::span<const Point2>> & lanes, double range);

}  // namespace lanepred::geom

#endif  // LANEPRED__GEOM_MAP__NEARBY_AGENTS_HPP_
