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

#include "lanepred/scenario/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

namespace lanepred::scenario
{

std::string to_string(Topology t)
{
  switch (t) {
    case Topology::kStraight:
      return "straight";
    case Topology::kFork:
      return "fork";
    case Topology::kCurve:
      return "curve";
    case Topology::kMixed:
      return "mixed";
  }
  return "mixed";
}

Topology topology_from_string(const std::string & name)
{
  if (name == "straight") {
    return Topology::kStraight;
  }
  if (name == "fork") {
    return Topology::kFork;
  }
  if (name == "curve") {
    return Topology::kCurve;
  }
  if (name == "mixed") {
    return Topology::kMixed;
  }
  throw std::invalid_argument(
    "lane_topology: expected straight|fork|curve|mixed, got '" + name + "'");
}

void SyntheticConfig::validate() const
{
  if (n_scenarios < 0) {
    throw std::invalid_argument("n_scenarios must be >= 0");
  }
  if (!(noise_std_m >= 0.0)) {
    throw std::invalid_argument("noise_std_m must be >= 0");
  }
  if (past_len < 2) {
    throw std::invalid_argument("past_len must be >= 2");
  }
  if (future_len < 1) {
    throw std::invalid_argument("future_len must be >= 1");
  }
  if (!(sample_rate_hz > 0.0)) {
    throw std::invalid_argument("sample_rate_hz must be positive");
  }
  if (max_nearby_agents < 0) {
    throw std::invalid_argument("max_nearby_agents must be >= 0");
  }
}

namespace
{

using geom::Point2;
using geom::Polyline;

constexpr double kTrunkStart = -150.0;  // local x where every lane begins
constexpr double kLaneWidth = 3.5;
constexpr double kSegmentLength = 40.0;
constexpr double kSampleStep = 1.0;

struct Pose
{
  Point2 p;
  double heading;
};

// Straight run, circular arc (signed turn, left positive), straight run.
std::vector<Pose> make_path(
  const Pose & start, double straight1, double radius, double turn, double straight2)
{
  std::vector<Pose> out{start};
  Pose cur = start;
  auto run = [&](double len) {
    const int n = std::max(1, static_cast<int>(std::ceil(len / kSampleStep)));
    const double step = len / n;
    for (int i = 0; i < n; ++i) {
      cur.p = cur.p + step * Point2{std::cos(cur.heading), std::sin(cur.heading)};
      out.push_back(cur);
    }
  };
  if (straight1 > 0.0) {
    run(straight1);
  }
  if (turn != 0.0) {
    const double arc = radius * std::abs(turn);
    const int n = std::max(2, static_cast<int>(std::ceil(arc / kSampleStep)));
    const double dtheta = turn / n;
    const double sign = turn > 0.0 ? 1.0 : -1.0;
    const Point2 center =
      cur.p + (sign * radius) * Point2{-std::sin(cur.heading), std::cos(cur.heading)};
    const double h0 = cur.heading;
    for (int i = 1; i <= n; ++i) {
      const double h = h0 + dtheta * i;
      cur.heading = h;
      cur.p = center + (sign * radius) * Point2{std::sin(h), -std::cos(h)};
      out.push_back(cur);
    }
  }
  if (straight2 > 0.0) {
    run(straight2);
  }
  return out;
}

Polyline offset_path(const std::vector<Pose> & path, double offset)
{
  Polyline out;
  out.reserve(path.size());
  for (const auto & pose : path) {
    out.push_back(pose.p + offset * Point2{-std::sin(pose.heading), std::cos(pose.heading)});
  }
  return out;
}

struct Route
{
  std::vector<std::size_t> segments;
  Polyline line;
  double slow_from_s{-1.0};  // arc length where the agent slows down; < 0 for never
};

class NetworkBuilder
{
public:
  // Splits a dense lane into ~kSegmentLength pieces sharing their junction points.
  std::vector<std::size_t> add_lane(const Polyline & dense)
  {
    std::vector<std::size_t> ids;
    std::size_t begin = 0;
    double acc = 0.0;
    for (std::size_t i = 1; i < dense.size(); ++i) {
      acc += geom::distance(dense[i - 1], dense[i]);
      const bool last = i + 1 == dense.size();
      const bool remaining_short =
        !last && geom::polyline_length(std::span(dense).subspan(i)) < 0.5 * kSegmentLength;
      if ((acc >= kSegmentLength && !remaining_short) || last) {
        geom::LaneSegment seg;
        seg.id = "s" + std::to_string(segments_.size());
        seg.points.assign(dense.begin() + static_cast<std::ptrdiff_t>(begin),
          dense.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        segments_.push_back(std::move(seg));
        if (!ids.empty()) {
          connect(ids.back(), segments_.size() - 1);
        }
        ids.push_back(segments_.size() - 1);
        begin = i;
        acc = 0.0;
      }
    }
    return ids;
  }

  void connect(std::size_t from, std::size_t to)
  {
    segments_[from].successors.push_back(segments_[to].id);
    segments_[to].predecessors.push_back(segments_[from].id);
  }

  Route route(const std::vector<std::size_t> & ids) const
  {
    Route r;
    r.segments = ids;
    for (const std::size_t id : ids) {
      for (const auto & p : segments_[id].points) {
        if (r.line.empty() || !(r.line.back() == p)) {
          r.line.push_back(p);
        }
      }
    }
    return r;
  }

  std::vector<geom::LaneSegment> take() { return std::move(segments_); }

private:
  std::vector<geom::LaneSegment> segments_;
};

struct Network
{
  std::vector<geom::LaneSegment> segments;
  std::vector<Route> routes;
};

class Generator
{
public:
  explicit Generator(const SyntheticConfig & cfg) : cfg_(cfg), rng_(cfg.seed) {}

  Scenario make(int index)
  {
    Topology topo = cfg_.lane_topology;
    if (topo == Topology::kMixed) {
      topo = static_cast<Topology>(uniform_int(0, 2));
    }
    Network net;
    switch (topo) {
      case Topology::kStraight:
        net = straight_network();
        break;
      case Topology::kFork:
        net = fork_network();
        break;
      default:
        net = curve_network();
        break;
    }

    const double dt = 1.0 / cfg_.sample_rate_hz;
    const int total = cfg_.past_len + cfg_.future_len;
    const std::int64_t base = uniform_int(0, 20);
    const std::int64_t present = base + cfg_.past_len - 1;

    const double phi = uniform(0.0, 2.0 * std::numbers::pi);
    const Point2 shift{uniform(-1000.0, 1000.0), uniform(-1000.0, 1000.0)};
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    auto place = [&](const Point2 & p) {
      return Point2{c * p.x - s * p.y, s * p.x + c * p.y} + shift;
    };

    auto drive = [&](const Route & route, double s_present, double v_before, double v_after) {
      AgentTrack track;
      const double t_slow =
        route.slow_from_s > s_present ? (route.slow_from_s - s_present) / v_before : -1.0;
      for (int k = 0; k < total; ++k) {
        const std::int64_t step = base + k;
        const double t = static_cast<double>(step - present) * dt;
        double along = s_present + v_before * t;
        if (t_slow >= 0.0 && t > t_slow) {
          along = s_present + v_before * t_slow + v_after * (t - t_slow);
        }
        Point2 p = geom::interpolate_at_arclength(route.line, along);
        if (cfg_.noise_std_m > 0.0) {
          p = p + Point2{gaussian(), gaussian()};
        }
        const Point2 w = place(p);
        track.states.push_back({step, w.x, w.y});
      }
      return track;
    };

    const auto target_route = static_cast<std::size_t>(
      uniform_int(0, static_cast<std::int64_t>(net.routes.size()) - 1));
    const double target_s = -kTrunkStart + uniform(-2.0, 2.0);
    const double target_v = uniform(4.0, 10.0);
    const Route & tr = net.routes[target_route];
    const double target_slow = tr.slow_from_s >= 0.0 ? target_v * uniform(0.6, 0.9) : target_v;

    std::vector<AgentTrack> tracks;
    AgentTrack target = drive(tr, target_s, target_v, target_slow);

    const int n_agents = static_cast<int>(uniform_int(0, cfg_.max_nearby_agents));
    for (int a = 0; a < n_agents; ++a) {
      const auto ri = static_cast<std::size_t>(
        uniform_int(0, static_cast<std::int64_t>(net.routes.size()) - 1));
      double gap = uniform(-25.0, 45.0);
      if (std::abs(gap) < 5.0) {
        gap = gap < 0.0 ? gap - 5.0 : gap + 5.0;
      }
      const double v = uniform(3.0, 11.0);
      const Route & r = net.routes[ri];
      const double v_slow = r.slow_from_s >= 0.0 ? v * uniform(0.6, 0.9) : v;
      tracks.push_back(drive(r, target_s + gap, v, v_slow));
    }
    const auto target_slot =
      static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(tracks.size())));
    tracks.insert(tracks.begin() + static_cast<std::ptrdiff_t>(target_slot), std::move(target));
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      tracks[i].id = "a" + std::to_string(i);
    }

    Scenario out;
    out.scenario_id = "syn-" + std::to_string(cfg_.seed) + "-" + std::to_string(index);
    out.sample_rate_hz = cfg_.sample_rate_hz;
    for (auto & seg : net.segments) {
      for (auto & p : seg.points) {
        p = place(p);
      }
    }
    out.lanes = geom::LaneGraph(std::move(net.segments));
    out.target_agent_id = tracks[target_slot].id;
    out.agents = std::move(tracks);
    out.present_step = present;
    return out;
  }

private:
  Network straight_network()
  {
    NetworkBuilder b;
    const int lanes = static_cast<int>(uniform_int(1, 3));
    std::vector<Route> routes;
    for (int l = 0; l < lanes; ++l) {
      const auto path = make_path({{kTrunkStart, 0.0}, 0.0}, 400.0, 0.0, 0.0, 0.0);
      routes.push_back(b.route(b.add_lane(offset_path(path, l * kLaneWidth))));
    }
    return {b.take(), std::move(routes)};
  }

  Network fork_network()
  {
    NetworkBuilder b;
    const double fork_x = uniform(3.0, 35.0);
    const auto trunk_path = make_path({{kTrunkStart, 0.0}, 0.0}, fork_x - kTrunkStart, 0, 0, 0);
    const auto trunk = b.add_lane(offset_path(trunk_path, 0.0));

    // Branch kinds: 0 straight, 1 left, 2 right; keep two or all three.
    std::vector<int> kinds{0, 1, 2};
    if (uniform_int(0, 1) == 0) {
      kinds.erase(kinds.begin() + static_cast<std::ptrdiff_t>(uniform_int(0, 2)));
    }
    std::vector<Route> routes;
    for (const int kind : kinds) {
      double turn = 0.0;
      if (kind != 0) {
        turn = (kind == 1 ? 1.0 : -1.0) * uniform(std::numbers::pi / 6.0, std::numbers::pi / 2.0);
      }
      const double radius = uniform(25.0, 60.0);
      const auto branch_path = make_path(trunk_path.back(), 0.0, radius, turn, 250.0);
      const auto branch = b.add_lane(offset_path(branch_path, 0.0));
      b.connect(trunk.back(), branch.front());
      std::vector<std::size_t> ids = trunk;
      ids.insert(ids.end(), branch.begin(), branch.end());
      Route r = b.route(ids);
      if (turn != 0.0) {
        r.slow_from_s = fork_x - kTrunkStart;
      }
      routes.push_back(std::move(r));
    }
    return {b.take(), std::move(routes)};
  }

  Network curve_network()
  {
    NetworkBuilder b;
    const double curve_x = uniform(-15.0, 25.0);
    const double radius = uniform(30.0, 100.0);
    const double turn = (uniform_int(0, 1) == 0 ? 1.0 : -1.0) *
                        uniform(std::numbers::pi / 4.0, 2.0 * std::numbers::pi / 3.0);
    const auto path =
      make_path({{kTrunkStart, 0.0}, 0.0}, curve_x - kTrunkStart, radius, turn, 200.0);
    const int lanes = static_cast<int>(uniform_int(1, 2));
    std::vector<Route> routes;
    for (int l = 0; l < lanes; ++l) {
      Route r = b.route(b.add_lane(offset_path(path, l * kLaneWidth)));
      r.slow_from_s = curve_x - kTrunkStart;
      routes.push_back(std::move(r));
    }
    return {b.take(), std::move(routes)};
  }

  double uniform(double lo, double hi)
  {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
  {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  double gaussian() { return std::normal_distribution<double>(0.0, cfg_.noise_std_m)(rng_); }

  SyntheticConfig cfg_;
  std::mt19937_64 rng_;
};

}  // namespace

std::vector<Scenario> generate_synthetic(const SyntheticConfig & cfg)
{
  cfg.validate();
  Generator gen(cfg);
  std::vector<Scenario> out;
  out.reserve(static_cast<std::size_t>(cfg.n_scenarios));
  for (int i = 0; i < cfg.n_scenarios; ++i) {
    out.push_back(gen.make(i));
  }
  return out;
}

}  // namespace lanepred::scenario
