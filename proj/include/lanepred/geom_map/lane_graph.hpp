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

#ifndef LANEPRED__GEOM_MAP__LANE_GRAPH_HPP_
#define LANEPRED__GEOM_MAP__LANE_GRAPH_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lanepred/geom_map/polyline.hpp"

namespace lanepred::geom
{

struct LaneSegment
{
  std::string id;
  Polyline points;
  std::vector<std::string> successors;
  std::vector<std::string> predecessors;

  friend bool operator==(const LaneSegment &, const LaneSegment &) = default;
};

/**
 * @brief Centerline segments plus successor / predecessor connectivity.
 *
 * Segments keep their insertion order, which is also the order candidate
 * extraction visits seeds in. Construction validates that every referenced id
 * exists, every polyline has at least two points and that consecutive points are
 * distinct.
 */
class LaneGraph
{
public:
  LaneGraph() = default;
  explicit LaneGraph(std::vector<LaneSegment> segments);

  const std::vector<LaneSegment> & segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  std::optional<std::size_t> index_of(std::string_view id) const;
  const LaneSegment & at(std::size_t index) const { return segments_.at(index); }

  /// Indices of the successors / predecessors of segment `index`, in listed order.
  const std::vector<std::size_t> & successor_indices(std::size_t index) const
  {
    return successor_idx_.at(index);
  }
  const std::vector<std::size_t> & predecessor_indices(std::size_t index) const
  {
    return predecessor_idx_.at(index);
  }

  LaneGraph translated(const Point2 & offset) const;
  /// Applies `fn` to every centerline point; connectivity is unchanged.
  LaneGraph transformed(const std::function<Point2(const Point2 &)> & fn) const;

  friend bool operator==(const LaneGraph & a, const LaneGraph & b)
  {
    return a.segments_ == b.segments_;
  }

private:
  std::vector<LaneSegment> segments_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> successor_idx_;
  std::vector<std::vector<std::size_t>> predecessor_idx_;
};

}  // namespace lanepred::geom

#endif  // LANEPRED__GEOM_MAP__LANE_GRAPH_HPP_
