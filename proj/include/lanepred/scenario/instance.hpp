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

#ifndef LANEPRED__SCENARIO__INSTANCE_HPP_
#define LANEPRED__SCENARIO__INSTANCE_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lanepred/geom_map/lane_candidates.hpp"
#include "lanepred/scenario/scenario.hpp"

namespace lanepred::scenario
{

struct InstanceConfig
{
  int past_len{4};     // P, points including the present
  int future_len{12};  // h
  bool align_heading{false};
  int context_agent_cap{16};  // agents kept for the pooled agent modes

  void validate() const;
};

/// A nearby agent kept for max-pooled agent encodings.
struct ContextAgent
{
  geom::Polyline past;  // P points, target frame
  int lane{-1};         // closest valid lane within range, -1 if none

  friend bool operator==(const ContextAgent &, const ContextAgent &) = default;
};

/**
 * @brief One normalized training sample.
 *
 * Coordinates live in the target frame: the target's present position is the
 * origin (and, with heading alignment, its last displacement points along +x).
 * Lanes and selected agents beyond the ones found are zero-filled with their
 * validity flag cleared.
 */
struct PredictionInstance
{
  std::string instance_id;
  geom::Point2 origin;      // world position of the target at present
  double heading_rad{0.0};  // frame rotation; 0 without heading alignment

  geom::Polyline past;                     // P
  geom::Polyline future;                   // h
  std::vector<geom::Polyline> lanes;       // N x M
  std::vector<bool> lane_valid;            // N
  std::vector<geom::Polyline> nearby_pasts;  // N x P
  std::vector<bool> agent_valid;           // N
  int ref_lane_index{0};
  std::vector<ContextAgent> context_agents;

  int past_len() const { return static_cast<int>(past.size()); }
  int future_len() const { return static_cast<int>(future.size()); }
  int num_lanes() const { return static_cast<int>(lanes.size()); }
  int lane_points() const { return lanes.empty() ? 0 : static_cast<int>(lanes.front().size()); }

  /// Maps a target-frame point back to world coordinates.
  geom::Point2 to_world(const geom::Point2 & p) const;

  friend bool operator==(const PredictionInstance &, const PredictionInstance &) = default;
};

/// Rejection with a short machine-readable reason ("no-lane", "invalid").
class InstanceRejected : public std::runtime_error
{
public:
  InstanceRejected(const std::string & reason, const std::string & what)
  : std::runtime_error(reason + ": " + what), reason_(reason)
  {
  }
  const std::string & reason() const { return reason_; }

private:
  std::string reason_;
};

/**
 * @brief Normalizes a scenario and assembles its instance.
 *
 * Extracts lane candidates around the target, labels the reference lane against
 * the target's future, picks one nearby agent per lane and pads everything to
 * max_candidates. Throws InstanceRejected.
 */
PredictionInstance build_instance(
  const Scenario & s, const geom::CandidateConfig & cfg, const InstanceConfig & icfg);

/// Lanes of an instance that carry data, as spans for labelling.
std::vector<std::span<const geom::Point2>> valid_lanes(const PredictionInstance & inst);

nlohmann::json instance_to_json(const PredictionInstance & inst);
PredictionInstance instance_from_json(const nlohmann::json & j);

void write_instance(std::ostream & out, const PredictionInstance & inst);
std::vector<PredictionInstance> load_instances(const std::filesystem::path & path);
void write_instances(
  const std::filesystem::path & path, const std::vector<PredictionInstance> & instances);

}  // namespace lanepred::scenario

#endif  // LANEPRED__SCENARIO__INSTANCE_HPP_
