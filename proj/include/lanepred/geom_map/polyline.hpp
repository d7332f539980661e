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

#ifndef LANEPRED__GEOM_MAP__POLYLINE_HPP_
#define LANEPRED__GEOM_MAP__POLYLINE_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lanepred::geom
{

struct Point2
{
  double x{0.0};
  double y{0.0};

  friend Point2 operator+(const Point2 & a, const Point2 & b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(const Point2 & a, const Point2 & b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, const Point2 & a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point2 & a, const Point2 & b) = default;
};

inline double dot(const Point2 & a, const Point2 & b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Point2 & a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2 & a, const Point2 & b) { return norm(a - b); }

using Polyline = std::vector<Point2>;

/// Raised for polylines that cannot describe a lane (fewer than two distinct points).
class InvalidLaneGeometry : public std::invalid_argument
{
public:
  explicit InvalidLaneGeometry(const std::string & what) : std::invalid_argument(what) {}
};

struct PolylineProjection
{
  double arclength{0.0};  // along the polyline, from its first point
  double distance{0.0};   // Euclidean distance from the query to the foot point
  Point2 foot;
};

/// Distance from p to the closed segment [a, b].
double point_to_segment_distance(const Point2 & p, const Point2 & a, const Point2 & b);

/// Continuous distance from p to the polyline (segment distance, not point-set).
double point_to_polyline_distance(const Point2 & p, std::span<const Point2> line);

/// Closest foot point on the polyline; ties resolve to the smallest arc length.
PolylineProjection project_onto_polyline(std::span<const Point2> line, const Point2 & p);

double polyline_length(std::span<const Point2> line);

/// Point at signed arc length s. Offsets before the start or past the end continue
/// along the first / last segment direction.
Point2 interpolate_at_arclength(std::span<const Point2> line, double s);

/// Drops consecutive duplicates; throws InvalidLaneGeometry when fewer than two
/// distinct points remain.
Polyline dedupe_consecutive(std::span<const Point2> line);

}  // namespace lanepred::geom

#endif  // LANEPRED__GEOM_MAP__POLYLINE_HPP_
