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

#include "lanepred/scenario/scenario_io.hpp"

#include <istream>
#include <ostream>
#include <set>
#include <utility>

namespace lanepred::scenario
{

using nlohmann::json;

namespace
{

const json & require(const json & obj, const std::string & key, const std::string & where)
{
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ScenarioError(where + key, "missing");
  }
  return *it;
}

std::string require_string(const json & obj, const std::string & key, const std::string & where)
{
  const json & v = require(obj, key, where);
  if (!v.is_string()) {
    throw ScenarioError(where + key, "expected a string");
  }
  return v.get<std::string>();
}

double require_number(const json & obj, const std::string & key, const std::string & where)
{
  const json & v = require(obj, key, where);
  if (!v.is_number()) {
    throw ScenarioError(where + key, "expected a number");
  }
  return v.get<double>();
}

std::int64_t require_integer(const json & obj, const std::string & key, const std::string & where)
{
  const json & v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw ScenarioError(where + key, "expected an integer");
  }
  return v.get<std::int64_t>();
}

const json & require_array(const json & obj, const std::string & key, const std::string & where)
{
  const json & v = require(obj, key, where);
  if (!v.is_array()) {
    throw ScenarioError(where + key, "expected an array");
  }
  return v;
}

std::vector<std::string> string_list(const json & arr, const std::string & field)
{
  std::vector<std::string> out;
  for (const auto & v : arr) {
    if (!v.is_string()) {
      throw ScenarioError(field, "expected an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

const std::set<std::string> kScenarioKeys = {
  "scenario_id", "sample_rate_hz", "lanes", "agents", "target_agent_id", "present_step"};

}  // namespace

json scenario_to_json(const Scenario & s)
{
  json lanes = json::array();
  for (const auto & seg : s.lanes.segments()) {
    json pts = json::array();
    for (const auto & p : seg.points) {
      pts.push_back({p.x, p.y});
    }
    lanes.push_back(
      {{"id", seg.id},
       {"points", std::move(pts)},
       {"successors", seg.successors},
       {"predecessors", seg.predecessors}});
  }
  json agents = json::array();
  for (const auto & a : s.agents) {
    json states = json::array();
    for (const auto & st : a.states) {
      states.push_back({{"step", st.step}, {"x", st.x}, {"y", st.y}});
    }
    agents.push_back({{"id", a.id}, {"states", std::move(states)}});
  }
  return {
    {"scenario_id", s.scenario_id},
    {"sample_rate_hz", s.sample_rate_hz},
    {"lanes", std::move(lanes)},
    {"agents", std::move(agents)},
    {"target_agent_id", s.target_agent_id},
    {"present_step", s.present_step}};
}

Scenario scenario_from_json(const json & j)
{
  if (!j.is_object()) {
    throw ScenarioError("scenario", "expected a JSON object");
  }
  for (const auto & [key, value] : j.items()) {
    if (kScenarioKeys.count(key) == 0) {
      throw ScenarioError(key, "unknown key");
    }
  }
  Scenario s;
  s.scenario_id = require_string(j, "scenario_id", "");
  s.sample_rate_hz = require_number(j, "sample_rate_hz", "");
  s.target_agent_id = require_string(j, "target_agent_id", "");
  s.present_step = require_integer(j, "present_step", "");

  std::vector<geom::LaneSegment> segments;
  const json & lanes = require_array(j, "lanes", "");
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const std::string where = "lanes[" + std::to_string(i) + "].";
    const json & lane = lanes[i];
    if (!lane.is_object()) {
      throw ScenarioError("lanes[" + std::to_string(i) + "]", "expected an object");
    }
    geom::LaneSegment seg;
    seg.id = require_string(lane, "id", where);
    for (const auto & p : require_array(lane, "points", where)) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ScenarioError(where + "points", "expected [x, y] number pairs");
      }
      seg.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    seg.successors = string_list(require_array(lane, "successors", where), where + "successors");
    seg.predecessors =
      string_list(require_array(lane, "predecessors", where), where + "predecessors");
    segments.push_back(std::move(seg));
  }
  try {
    s.lanes = geom::LaneGraph(std::move(segments));
  } catch (const geom::InvalidLaneGeometry & e) {
    throw ScenarioError("lanes", e.what());
  }

  const json & agents = require_array(j, "agents", "");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "agents[" + std::to_string(i) + "].";
    const json & agent = agents[i];
    if (!agent.is_object()) {
      throw ScenarioError("agents[" + std::to_string(i) + "]", "expected an object");
    }
    AgentTrack track;
    track.id = require_string(agent, "id", where);
    const json & states = require_array(agent, "states", where);
    for (std::size_t k = 0; k < states.size(); ++k) {
      const std::string sw = where + "states[" + std::to_string(k) + "].";
      track.states.push_back(
        {require_integer(states[k], "step", sw), require_number(states[k], "x", sw),
         require_number(states[k], "y", sw)});
      if (k > 0 && track.states[k].step <= track.states[k - 1].step) {
        throw ScenarioError(sw + "step", "steps must be strictly increasing");
      }
    }
    s.agents.push_back(std::move(track));
  }
  if (s.find_agent(s.target_agent_id) == nullptr) {
    throw ScenarioError("target_agent_id", "'" + s.target_agent_id + "' is not among agents");
  }
  return s;
}

std::optional<Scenario> ScenarioReader::next()
{
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (text.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error & e) {
      throw FormatError(line_, "json", e.what());
    }
    try {
      return scenario_from_json(j);
    } catch (const ScenarioError & e) {
      throw FormatError(line_, e.field(), e.what());
    }
  }
  return std::nullopt;
}

std::vector<Scenario> load_scenarios(const std::filesystem::path & path)
{
  std::ifstream in = open_input(path);
  ScenarioReader reader(in);
  std::vector<Scenario> out;
  while (auto s = reader.next()) {
    out.push_back(std::move(*s));
  }
  return out;
}

void write_scenario(std::ostream & out, const Scenario & s)
{
  out << scenario_to_json(s).dump() << '\n';
}

void write_scenarios(const std::filesystem::path & path, const std::vector<Scenario> & scenarios)
{
  std::ofstream out = open_output(path);
  for (const auto & s : scenarios) {
    write_scenario(out, s);
  }
}

std::ifstream open_input(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path & path)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

}  // namespace lanepred::scenario
