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

#include "lanepred/scenario/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <utility>

#include "lanepred/geom_map/nearby_agents.hpp"
#include "lanepred/scenario/scenario_io.hpp"

namespace lanepred::scenario
{

using nlohmann::json;

void InstanceConfig::validate() const
{
  if (past_len < 1) {
    throw std::invalid_argument("past_len must be >= 1");
  }
  if (future_len < 1) {
    throw std::invalid_argument("future_len must be >= 1");
  }
  if (context_agent_cap < 0) {
    throw std::invalid_argument("context_agent_cap must be >= 0");
  }
}

geom::Point2 PredictionInstance::to_world(const geom::Point2 & p) const
{
  if (heading_rad == 0.0) {
    return p + origin;
  }
  const double c = std::cos(heading_rad);
  const double s = std::sin(heading_rad);
  return geom::Point2{c * p.x - s * p.y, s * p.x + c * p.y} + origin;
}

std::vector<std::span<const geom::Point2>> valid_lanes(const PredictionInstance & inst)
{
  std::vector<std::span<const geom::Point2>> out;
  for (std::size_t n = 0; n < inst.lanes.size(); ++n) {
    if (inst.lane_valid[n]) {
      out.emplace_back(inst.lanes[n]);
    }
  }
  return out;
}

PredictionInstance build_instance(
  const Scenario & s, const geom::CandidateConfig & cfg, const InstanceConfig & icfg)
{
  cfg.validate();
  icfg.validate();
  const int P = icfg.past_len;
  const int h = icfg.future_len;
  try {
    validate_scenario(s, P, h);
  } catch (const ScenarioError & e) {
    throw InstanceRejected("invalid", e.what());
  }
  const AgentTrack & target = *s.find_agent(s.target_agent_id);
  const geom::Polyline world_past = *track_window(target, s.present_step - P + 1, P);
  const geom::Polyline world_future = *track_window(target, s.present_step + 1, h);

  PredictionInstance inst;
  inst.instance_id = s.scenario_id;
  inst.origin = world_past.back();
  if (icfg.align_heading && P >= 2) {
    const geom::Point2 d = world_past[P - 1] - world_past[P - 2];
    if (geom::norm(d) > 1e-9) {
      inst.heading_rad = std::atan2(d.y, d.x);
    }
  }
  const geom::Point2 origin = inst.origin;
  const double c = std::cos(-inst.heading_rad);
  const double sn = std::sin(-inst.heading_rad);
  const bool rotate = inst.heading_rad != 0.0;
  auto to_frame = [&](const geom::Point2 & p) {
    const geom::Point2 t = p - origin;
    if (!rotate) {
      return t;
    }
    return geom::Point2{c * t.x - sn * t.y, sn * t.x + c * t.y};
  };
  auto map_all = [&](const geom::Polyline & line) {
    geom::Polyline out;
    out.reserve(line.size());
    for (const auto & p : line) {
      out.push_back(to_frame(p));
    }
    return out;
  };

  inst.past = map_all(world_past);
  inst.future = map_all(world_future);

  const geom::LaneGraph graph = s.lanes.transformed(to_frame);
  const auto candidates = geom::extract_lane_candidates(graph, geom::Point2{}, cfg);
  if (candidates.empty()) {
    throw InstanceRejected("no-lane", "no lane segment within search radius");
  }
  inst.ref_lane_index =
    static_cast<int>(geom::label_reference_lane(inst.future, candidates, cfg.eta));

  std::vector<geom::AgentPast> agents;
  for (const auto & track : s.agents) {
    if (track.id == s.target_agent_id) {
      continue;
    }
    if (auto past = track_window(track, s.present_step - P + 1, P)) {
      agents.push_back({track.id, map_all(*past)});
    }
  }

  const std::size_t N = static_cast<std::size_t>(cfg.max_candidates);
  const std::size_t M = static_cast<std::size_t>(cfg.num_points());
  inst.lanes.assign(N, geom::Polyline(M));
  inst.lane_valid.assign(N, false);
  inst.nearby_pasts.assign(N, geom::Polyline(static_cast<std::size_t>(P)));
  inst.agent_valid.assign(N, false);
  for (std::size_t n = 0; n < candidates.size(); ++n) {
    inst.lanes[n] = candidates[n].points;
    inst.lane_valid[n] = true;
    const auto pick = geom::select_nearby_agent(
      candidates[n], agents, candidates[n].anchor_arclength, cfg);
    if (pick) {
      inst.nearby_pasts[n] = agents[*pick].past;
      inst.agent_valid[n] = true;
    }
  }

  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return geom::norm(agents[a].past.back()) < geom::norm(agents[b].past.back());
  });
  if (order.size() > static_cast<std::size_t>(icfg.context_agent_cap)) {
    order.resize(static_cast<std::size_t>(icfg.context_agent_cap));
  }
  const auto lanes = valid_lanes(inst);
  for (const std::size_t a : order) {
    const auto lane = geom::closest_lane(agents[a].past.back(), lanes, cfg.agent_lateral_range_m);
    inst.context_agents.push_back({agents[a].past, lane ? static_cast<int>(*lane) : -1});
  }
  return inst;
}

// ---------------------------------------------------------------------------
// JSON

namespace
{

json points_json(const geom::Polyline & line)
{
  json out = json::array();
  for (const auto & p : line) {
    out.push_back({p.x, p.y});
  }
  return out;
}

geom::Polyline points_from(const json & j, const std::string & field)
{
  if (!j.is_array()) {
    throw ScenarioError(field, "expected an array of [x, y]");
  }
  geom::Polyline out;
  out.reserve(j.size());
  for (const auto & p : j) {
    if (!p.is_array() || p.size() != 2) {
      throw ScenarioError(field, "expected [x, y] pairs");
    }
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

const json & field(const json & j, const char * key)
{
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ScenarioError(key, "missing");
  }
  return *it;
}

}  // namespace

json instance_to_json(const PredictionInstance & inst)
{
  json lanes = json::array();
  for (const auto & l : inst.lanes) {
    lanes.push_back(points_json(l));
  }
  json nearby = json::array();
  for (const auto & a : inst.nearby_pasts) {
    nearby.push_back(points_json(a));
  }
  json context = json::array();
  for (const auto & a : inst.context_agents) {
    context.push_back({{"past", points_json(a.past)}, {"lane", a.lane}});
  }
  return {
    {"instance_id", inst.instance_id},
    {"origin", {inst.origin.x, inst.origin.y}},
    {"heading_rad", inst.heading_rad},
    {"past", points_json(inst.past)},
    {"future", points_json(inst.future)},
    {"lanes", std::move(lanes)},
    {"lane_valid", inst.lane_valid},
    {"nearby_pasts", std::move(nearby)},
    {"agent_valid", inst.agent_valid},
    {"ref_lane_index", inst.ref_lane_index},
    {"context_agents", std::move(context)}};
}

PredictionInstance instance_from_json(const json & j)
{
  PredictionInstance inst;
  try {
    inst.instance_id = field(j, "instance_id").get<std::string>();
    const json & o = field(j, "origin");
    inst.origin = {o.at(0).get<double>(), o.at(1).get<double>()};
    inst.heading_rad = field(j, "heading_rad").get<double>();
    inst.past = points_from(field(j, "past"), "past");
    inst.future = points_from(field(j, "future"), "future");
    for (const auto & l : field(j, "lanes")) {
      inst.lanes.push_back(points_from(l, "lanes"));
    }
    inst.lane_valid = field(j, "lane_valid").get<std::vector<bool>>();
    for (const auto & a : field(j, "nearby_pasts")) {
      inst.nearby_pasts.push_back(points_from(a, "nearby_pasts"));
    }
    inst.agent_valid = field(j, "agent_valid").get<std::vector<bool>>();
    inst.ref_lane_index = field(j, "ref_lane_index").get<int>();
    for (const auto & a : field(j, "context_agents")) {
      inst.context_agents.push_back(
        {points_from(field(a, "past"), "context_agents.past"), field(a, "lane").get<int>()});
    }
  } catch (const json::exception & e) {
    throw ScenarioError("instance", e.what());
  }
  const std::size_t N = inst.lanes.size();
  if (N == 0 || inst.lane_valid.size() != N || inst.nearby_pasts.size() != N ||
      inst.agent_valid.size() != N)
  {
    throw ScenarioError("lanes", "per-lane arrays disagree in length");
  }
  for (const auto & l : inst.lanes) {
    if (l.size() != inst.lanes.front().size()) {
      throw ScenarioError("lanes", "lanes differ in point count");
    }
  }
  for (const auto & a : inst.nearby_pasts) {
    if (a.size() != inst.past.size()) {
      throw ScenarioError("nearby_pasts", "agent past length differs from target past");
    }
  }
  if (inst.ref_lane_index < 0 || static_cast<std::size_t>(inst.ref_lane_index) >= N ||
      !inst.lane_valid[static_cast<std::size_t>(inst.ref_lane_index)])
  {
    throw ScenarioError("ref_lane_index", "must point at a valid lane");
  }
  return inst;
}

void write_instance(std::ostream & out, const PredictionInstance & inst)
{
  out << instance_to_json(inst).dump() << '\n';
}

std::vector<PredictionInstance> load_instances(const std::filesystem::path & path)
{
  std::ifstream in = open_input(path);
  std::vector<PredictionInstance> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      out.push_back(instance_from_json(json::parse(text)));
    } catch (const json::parse_error & e) {
      throw FormatError(line, "json", e.what());
    } catch (const ScenarioError & e) {
      throw FormatError(line, e.field(), e.what());
    }
  }
  return out;
}

void write_instances(
  const std::filesystem::path & path, const std::vector<PredictionInstance> & instances)
{
  std::ofstream out = open_output(path);
  for (const auto & inst : instances) {
    write_instance(out, inst);
  }
}

}  // namespace lanepred::scenario
