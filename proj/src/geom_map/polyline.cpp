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

#include "lanepred/geom_map/polyline.hpp"

#include <algorithm>
#include <limits>

namespace lanepred::geom
{

namespace
{

// Segment parameter of the foot point, clamped to [0, 1].
double foot_parameter(const Point2 & p, const Point2 & a, const Point2 & b)
{
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 <= 0.0) {
    return 0.0;
  }
  return std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
}

}  // namespace

double point_to_segment_distance(const Point2 & p, const Point2 & a, const Point2 & b)
{
  const double t = foot_parameter(p, a, b);
  return distance(p, a + t * (b - a));
}

double point_to_polyline_distance(const Point2 & p, std::span<const Point2> line)
{
  if (line.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  if (line.size() == 1) {
    return distance(p, line.front());
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    best = std::min(best, point_to_segment_distance(p, line[i], line[i + 1]));
  }
  return best;
}

PolylineProjection project_onto_polyline(std::span<const Point2> line, const Point2 & p)
{
  if (line.size() < 2) {
    throw InvalidLaneGeometry("projection needs a polyline with at least two points");
  }
  PolylineProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  double start = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double seg_len = distance(line[i], line[i + 1]);
    const double t = foot_parameter(p, line[i], line[i + 1]);
    const Point2 foot = line[i] + t * (line[i + 1] - line[i]);
    const double d = distance(p, foot);
    if (d < best.distance) {
      best = {start + t * seg_len, d, foot};
    }
    start += seg_len;
  }
  return best;
}

double polyline_length(std::span<const Point2> line)
{
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    total += distance(line[i], line[i + 1]);
  }
  return total;
}

Point2 interpolate_at_arclength(std::span<const Point2> line, double s)
{
  if (line.size() < 2) {
    throw InvalidLaneGeometry("interpolation needs a polyline with at least two points");
  }
  if (s <= 0.0) {
    const Point2 d = line[1] - line[0];
    return line[0] + (s / norm(d)) * d;
  }
  double start = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double seg_len = distance(line[i], line[i + 1]);
    if (s <= start + seg_len) {
      return line[i] + ((s - start) / seg_len) * (line[i + 1] - line[i]);
    }
    start += seg_len;
  }
  const Point2 & a = line[line.size() - 2];
  const Point2 & b = line.back();
  const Point2 d = b - a;
  return b + ((s - start) / norm(d)) * d;
}

Polyline dedupe_consecutive(std::span<const Point2> line)
{
  Polyline out;
  out.reserve(line.size());
  for (const auto & p : line) {
    if (out.empty() || !(out.back() == p)) {
      out.push_back(p);
    }
  }
  if (out.size() < 2) {
    throw InvalidLaneGeometry("polyline has fewer than two distinct points");
  }
  return out;
}

}  // namespace lanepred::geom
