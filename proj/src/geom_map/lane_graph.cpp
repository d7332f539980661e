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

#include "lanepred/geom_map/lane_graph.hpp"

#include <utility>

namespace lanepred::geom
{

LaneGraph::LaneGraph(std::vector<LaneSegment> segments) : segments_(std::move(segments))
{
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto & seg = segments_[i];
    if (!index_.emplace(seg.id, i).second) {
      throw InvalidLaneGeometry("duplicate lane segment id '" + seg.id + "'");
    }
    if (seg.points.size() < 2) {
      throw InvalidLaneGeometry("lane segment '" + seg.id + "' has fewer than two points");
    }
    for (std::size_t j = 0; j + 1 < seg.points.size(); ++j) {
      if (seg.points[j] == seg.points[j + 1]) {
        throw InvalidLaneGeometry(
          "lane segment '" + seg.id + "' repeats point " + std::to_string(j));
      }
    }
  }
  auto resolve = [this](const LaneSegment & seg, const std::vector<std::string> & ids) {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (const auto & id : ids) {
      const auto it = index_.find(id);
      if (it == index_.end()) {
        throw InvalidLaneGeometry(
          "lane segment '" + seg.id + "' references unknown segment '" + id + "'");
      }
      out.push_back(it->second);
    }
    return out;
  };
  successor_idx_.reserve(segments_.size());
  predecessor_idx_.reserve(segments_.size());
  for (const auto & seg : segments_) {
    successor_idx_.push_back(resolve(seg, seg.successors));
    predecessor_idx_.push_back(resolve(seg, seg.predecessors));
  }
}

std::optional<std::size_t> LaneGraph::index_of(std::string_view id) const
{
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

LaneGraph LaneGraph::translated(const Point2 & offset) const
{
  return transformed([&offset](const Point2 & p) { return p + offset; });
}

LaneGraph LaneGraph::transformed(const std::function<Point2(const Point2 &)> & fn) const
{
  std::vector<LaneSegment> moved = segments_;
  for (auto & seg : moved) {
    for (auto & p : seg.points) {
      p = fn(p);
    }
  }
  return LaneGraph(std::move(moved));
}

}  // namespace lanepred::geom
