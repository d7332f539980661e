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

#ifndef LANEPRED__GEOM_MAP__LANE_CANDIDATES_HPP_
#define LANEPRED__GEOM_MAP__LANE_CANDIDATES_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lanepred/geom_map/lane_graph.hpp"
#include "lanepred/geom_map/polyline.hpp"

namespace lanepred::geom
{

/// Per-horizon weight of the lane-trajectory distance.
enum class EtaKind
{
  kLinear,    // eta(i) = i
  kConstant,  // eta(i) = 1
};

double eta_weight(EtaKind eta, int step);
std::string to_string(EtaKind eta);
EtaKind eta_from_string(const std::string & name);

struct CandidateConfig
{
  double search_radius_m{10.0};
  double forward_len_m{100.0};
  double backward_len_m{30.0};
  double spacing_m{0.5};
  int max_candidates{6};
  double agent_lateral_range_m{3.5};
  EtaKind eta{EtaKind::kLinear};

  /// M: points per candidate, round((forward + backward) / spacing).
  int num_points() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct LaneCandidate
{
  Polyline points;                           // exactly M points, target frame
  std::vector<std::string> source_segments;  // chain of segment ids, driving order
  double anchor_arclength{0.0};              // target projection along `points`
  double seed_distance{0.0};                 // target to nearest chain segment
};

/**
 * @brief Resamples a centerline into M points with equal chord spacing.
 *
 * Sampling starts at arc-length offset -backward_len from the anchor's projection
 * and walks forward so that every pair of adjacent output points is exactly
 * `spacing_m` apart. Parts of the walk beyond either end of the input continue
 * along the terminal segment direction. On straight input this coincides with
 * sampling the arc-length grid {-backward + j * spacing}.
 */
Polyline resample_polyline(
  std::span<const Point2> points, const CandidateConfig & cfg, const Point2 & anchor);

/**
 * @brief Lane candidates around `target`, nearest seed first.
 *
 * Every segment passing within the search radius seeds chains that extend
 * backward along predecessors and forward along successors until the configured
 * lengths are covered; each branch spawns its own chain. Identical chains are
 * merged, the survivors sorted by distance (stable on discovery order), capped
 * at max_candidates and resampled.
 */
std::vector<LaneCandidate> extract_lane_candidates(
  const LaneGraph & graph, const Point2 & target, const CandidateConfig & cfg);

struct NearestLanePoint
{
  std::size_t index{0};
  double distance{0.0};
};

/// Nearest lane point by point-set distance; ties resolve to the smallest index.
NearestLanePoint nearest_lane_point(const Point2 & p, std::span<const Point2> lane);

/// delta(V, L): min over the lane points of the Euclidean distance to p.
double point_to_lane_distance(const Point2 & p, std::span<const Point2> lane);
inline double point_to_lane_distance(const Point2 & p, const LaneCandidate & lane)
{
  return point_to_lane_distance(p, lane.points);
}

/// D(V_f, L) = sum_i eta(i) * min_m |V_f[i] - L[m]|, i = 1..h.
double lane_trajectory_distance(
  std::span<const Point2> future, std::span<const Point2> lane, EtaKind eta);

/// argmin of lane_trajectory_distance, smallest index on ties. Throws on empty input.
std::size_t label_reference_lane(
  std::span<const Point2> future, const std::vector<LaneCandidate> & candidates, EtaKind eta);
std::size_t label_reference_lane(
  std::span<const Point2> future, const std::vector<std::span<const Point2>> & lanes,
  EtaKind eta);

}  // namespace lanepred::geom

#endif  // LANEPRED__GEOM_MAP__LANE_CANDIDATES_HPP_
