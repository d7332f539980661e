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

#include "lanepred/geom_map/lane_candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace lanepred::geom
{

double eta_weight(EtaKind eta, int step)
{
  switch (eta) {
    case EtaKind::kLinear:
      return static_cast<double>(step);
    case EtaKind::kConstant:
      return 1.0;
  }
  return 1.0;
}

std::string to_string(EtaKind eta)
{
  return eta == EtaKind::kLinear ? "linear" : "constant";
}

EtaKind eta_from_string(const std::string & name)
{
  if (name == "linear") {
    return EtaKind::kLinear;
  }
  if (name == "constant") {
    return EtaKind::kConstant;
  }
  throw std::invalid_argument("eta: expected 'linear' or 'constant', got '" + name + "'");
}

int CandidateConfig::num_points() const
{
  return static_cast<int>(std::lround((forward_len_m + backward_len_m) / spacing_m));
}

void CandidateConfig::validate() const
{
  auto require_positive = [](double v, const char * name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be positive");
    }
  };
  require_positive(search_radius_m, "search_radius_m");
  require_positive(forward_len_m, "forward_len_m");
  require_positive(backward_len_m, "backward_len_m");
  require_positive(spacing_m, "spacing_m");
  require_positive(agent_lateral_range_m, "agent_lateral_range_m");
  if (max_candidates < 1) {
    throw std::invalid_argument("max_candidates must be >= 1");
  }
  const double ratio = (forward_len_m + backward_len_m) / spacing_m;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || ratio < 1.0) {
    throw std::invalid_argument(
      "spacing_m must divide forward_len_m + backward_len_m into a positive integer count");
  }
}

// ---------------------------------------------------------------------------
// Resampling

namespace
{

// Larger root t of |a + t (b - a) - c| = r. Callers guarantee a root exists.
double circle_exit_parameter(const Point2 & a, const Point2 & b, const Point2 & c, double r)
{
  const Point2 d = b - a;
  const Point2 f = a - c;
  const double qa = dot(d, d);
  const double qb = 2.0 * dot(f, d);
  const double qc = dot(f, f) - r * r;
  const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
  return (-qb + std::sqrt(disc)) / (2.0 * qa);
}

}  // namespace

Polyline resample_polyline(
  std::span<const Point2> points, const CandidateConfig & cfg, const Point2 & anchor)
{
  const Polyline line = dedupe_consecutive(points);
  const int count = cfg.num_points();
  const double spacing = cfg.spacing_m;

  const double anchor_s = project_onto_polyline(line, anchor).arclength;
  const double start_s = anchor_s - cfg.backward_len_m;

  // Working path: the start sample, every vertex beyond it, then a straight
  // continuation long enough for the whole walk.
  Polyline path;
  path.reserve(line.size() + 2);
  path.push_back(interpolate_at_arclength(line, start_s));
  double cumulative = 0.0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (i > 0) {
      cumulative += distance(line[i - 1], line[i]);
    }
    if (cumulative > start_s && !(line[i] == path.back())) {
      path.push_back(line[i]);
    }
  }
  {
    const Point2 & a = line[line.size() - 2];
    const Point2 & b = line.back();
    const Point2 dir = (1.0 / distance(a, b)) * (b - a);
    const Point2 & last = path.back();
    path.push_back(last + (static_cast<double>(count + 1) * spacing) * dir);
  }

  Polyline out;
  out.reserve(static_cast<std::size_t>(count));
  out.push_back(path.front());
  std::size_t seg = 0;
  Point2 current = path.front();
  while (static_cast<int>(out.size()) < count) {
    while (seg + 2 < path.size() && distance(current, path[seg + 1]) < spacing) {
      ++seg;
    }
    const double t = circle_exit_parameter(path[seg], path[seg + 1], current, spacing);
    current = path[seg] + t * (path[seg + 1] - path[seg]);
    out.push_back(current);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Candidate extraction

namespace
{

constexpr std::size_t kMaxPathsPerDirection = 64;

using Path = std::vector<std::size_t>;

// All extensions from `from` along `next` until `need` metres are covered, the
// graph ends, or a segment would repeat. Each returned path excludes `from`.
void extend_paths(
  const LaneGraph & graph, const std::vector<double> & lengths, std::size_t from, double need,
  bool forward, Path & prefix, std::vector<Path> & out)
{
  if (out.size() >= kMaxPathsPerDirection) {
    return;
  }
  const auto & next =
    forward ? graph.successor_indices(from) : graph.predecessor_indices(from);
  bool extended = false;
  if (need > 0.0) {
    for (const std::size_t n : next) {
      if (std::find(prefix.begin(), prefix.end(), n) != prefix.end()) {
        continue;
      }
      extended = true;
      prefix.push_back(n);
      extend_paths(graph, lengths, n, need - lengths[n], forward, prefix, out);
      prefix.pop_back();
    }
  }
  if (!extended) {
    out.push_back(prefix);
  }
}

bool contains_run(const Path & haystack, const Path & needle)
{
  if (needle.size() > haystack.size()) {
    return false;
  }
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

}  // namespace

std::vector<LaneCandidate> extract_lane_candidates(
  const LaneGraph & graph, const Point2 & target, const CandidateConfig & cfg)
{
  cfg.validate();
  std::vector<double> lengths;
  lengths.reserve(graph.size());
  for (const auto & seg : graph.segments()) {
    lengths.push_back(polyline_length(seg.points));
  }

  struct Chain
  {
    Path segments;
    double distance;
  };
  std::vector<Chain> chains;
  std::map<Path, std::size_t> seen;

  for (std::size_t s = 0; s < graph.size(); ++s) {
    const auto & pts = graph.at(s).points;
    const double d = point_to_polyline_distance(target, pts);
    if (d > cfg.search_radius_m) {
      continue;
    }
    const double along = project_onto_polyline(pts, target).arclength;

    std::vector<Path> backward;
    std::vector<Path> forward;
    Path prefix{s};
    extend_paths(graph, lengths, s, cfg.backward_len_m - along, false, prefix, backward);
    prefix = {s};
    extend_paths(graph, lengths, s, cfg.forward_len_m - (lengths[s] - along), true, prefix, forward);

    for (const auto & b : backward) {
      for (const auto & f : forward) {
        // b and f both start with s.
        Path ids(b.rbegin(), b.rend());
        ids.insert(ids.end(), f.begin() + 1, f.end());
        Path sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
          continue;
        }
        const auto it = seen.find(ids);
        if (it != seen.end()) {
          chains[it->second].distance = std::min(chains[it->second].distance, d);
          continue;
        }
        seen.emplace(ids, chains.size());
        chains.push_back({std::move(ids), d});
      }
    }
  }

  // A chain lying entirely inside a longer one describes the same lane.
  std::vector<bool> dropped(chains.size(), false);
  for (std::size_t i = 0; i < chains.size(); ++i) {
    for (std::size_t j = 0; j < chains.size() && !dropped[i]; ++j) {
      if (i == j || dropped[j] || chains[j].segments.size() <= chains[i].segments.size()) {
        continue;
      }
      if (contains_run(chains[j].segments, chains[i].segments)) {
        chains[j].distance = std::min(chains[j].distance, chains[i].distance);
        dropped[i] = true;
      }
    }
  }
  std::vector<Chain> kept;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    if (!dropped[i]) {
      kept.push_back(std::move(chains[i]));
    }
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Chain & a, const Chain & b) {
    return a.distance < b.distance;
  });
  if (kept.size() > static_cast<std::size_t>(cfg.max_candidates)) {
    kept.resize(static_cast<std::size_t>(cfg.max_candidates));
  }

  std::vector<LaneCandidate> out;
  out.reserve(kept.size());
  for (const auto & chain : kept) {
    Polyline joined;
    LaneCandidate cand;
    for (const std::size_t idx : chain.segments) {
      const auto & seg = graph.at(idx);
      joined.insert(joined.end(), seg.points.begin(), seg.points.end());
      cand.source_segments.push_back(seg.id);
    }
    cand.points = resample_polyline(joined, cfg, target);
    cand.anchor_arclength = project_onto_polyline(cand.points, target).arclength;
    cand.seed_distance = chain.distance;
    out.push_back(std::move(cand));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distances and labelling

NearestLanePoint nearest_lane_point(const Point2 & p, std::span<const Point2> lane)
{
  NearestLanePoint best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t m = 0; m < lane.size(); ++m) {
    const double d = distance(p, lane[m]);
    if (d < best.distance) {
      best = {m, d};
    }
  }
  return best;
}

double point_to_lane_distance(const Point2 & p, std::span<const Point2> lane)
{
  return nearest_lane_point(p, lane).distance;
}

double lane_trajectory_distance(
  std::span<const Point2> future, std::span<const Point2> lane, EtaKind eta)
{
  double total = 0.0;
  for (std::size_t i = 0; i < future.size(); ++i) {
    total += eta_weight(eta, static_cast<int>(i) + 1) * point_to_lane_distance(future[i], lane);
  }
  return total;
}

std::size_t label_reference_lane(
  std::span<const Point2> future, const std::vector<std::span<const Point2>> & lanes,
  EtaKind eta)
{
  if (lanes.empty()) {
    throw std::invalid_argument("cannot label a reference lane without candidates");
  }
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < lanes.size(); ++n) {
    const double d = lane_trajectory_distance(future, lanes[n], eta);
    if (d < best_d) {
      best = n;
      best_d = d;
    }
  }
  return best;
}

std::size_t label_reference_lane(
  std::span<const Point2> future, const std::vector<LaneCandidate> & candidates, EtaKind eta)
{
  std::vector<std::span<const Point2>> lanes;
  lanes.reserve(candidates.size());
  for (const auto & c : candidates) {
    lanes.emplace_back(c.points);
  }
  return label_reference_lane(future, lanes, eta);
}

}  // namespace lanepred::geom
