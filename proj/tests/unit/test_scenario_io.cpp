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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lanepred/geom_map/lane_candidates.hpp"
#include "lanepred/scenario/instance.hpp"
#include "lanepred/scenario/scenario.hpp"
#include "lanepred/scenario/scenario_io.hpp"
#include "lanepred/scenario/synthetic.hpp"
#include "lanepred/train/losses.hpp"
#include "support/oracles.hpp"
#include "support/test_support.hpp"

namespace lanepred::scenario
{
namespace
{

namespace oracle = lanepred::testing::oracle;
using geom::Point2;
using lanepred::testing::TempDir;

AgentTrack track_along(const std::string & id, Point2 start, Point2 step, int first, int count)
{
  AgentTrack t{id, {}};
  for (int k = 0; k < count; ++k) {
    const Point2 p = start + static_cast<double>(k) * step;
    t.states.push_back({first + k, p.x, p.y});
  }
  return t;
}

// Two parallel lanes along +x at y = 100 and y = 103.5, target on the upper one.
Scenario two_lane_scenario()
{
  Scenario s;
  s.scenario_id = "two-lane";
  s.sample_rate_hz = 2.0;
  s.lanes = geom::LaneGraph({
    {"low", {{-100, 100}, {300, 100}}, {}, {}},
    {"high", {{-100, 103.5}, {300, 103.5}}, {}, {}},
  });
  s.agents.push_back(track_along("ego", {40, 103.5}, {4, 0}, 0, 16));
  s.agents.push_back(track_along("lead", {70, 103.6}, {3, 0}, 0, 16));
  s.target_agent_id = "ego";
  s.present_step = 3;
  return s;
}

// ---------------------------------------------------------------- io

TEST(ScenarioIo, EmptyFileGivesEmptyStream)
{
  TempDir dir("io");
  lanepred::scenario::write_scenarios(dir / "empty.jsonl", {});
  EXPECT_TRUE(load_scenarios(dir / "empty.jsonl").empty());
}

TEST(ScenarioIo, RoundTripIsBitIdentical)
{
  SyntheticConfig cfg;
  cfg.n_scenarios = 20;
  cfg.seed = 3;
  const auto scenarios = generate_synthetic(cfg);
  TempDir dir("io");
  write_scenarios(dir / "a.jsonl", scenarios);
  const auto back = load_scenarios(dir / "a.jsonl");
  ASSERT_EQ(back.size(), scenarios.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i], scenarios[i]) << "scenario " << i;
  }
  write_scenarios(dir / "b.jsonl", back);
  EXPECT_EQ(lanepred::testing::read_file(dir / "a.jsonl"),
    lanepred::testing::read_file(dir / "b.jsonl"));
}

TEST(ScenarioIo, MissingTargetIdNamesFieldAndLine)
{
  std::ostringstream os;
  write_scenario(os, two_lane_scenario());
  auto j = nlohmann::json::parse(os.str());
  j.erase("target_agent_id");
  std::istringstream in(os.str() + j.dump() + "\n");
  ScenarioReader reader(in);
  EXPECT_TRUE(reader.next().has_value());
  try {
    reader.next();
    FAIL() << "expected FormatError";
  } catch (const FormatError & e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "target_agent_id");
    EXPECT_NE(std::string(e.what()).find("target_agent_id"), std::string::npos);
  }
}

TEST(ScenarioIo, RejectsUnknownKeysAndBadSteps)
{
  auto j = scenario_to_json(two_lane_scenario());
  auto extra = j;
  extra["weather"] = "rain";
  EXPECT_THROW(scenario_from_json(extra), ScenarioError);
  auto bad = j;
  bad["agents"][0]["states"][1]["step"] = 0;
  try {
    scenario_from_json(bad);
    FAIL();
  } catch (const ScenarioError & e) {
    EXPECT_NE(e.field().find("step"), std::string::npos);
  }
}

TEST(ScenarioIo, MalformedJsonReportsLine)
{
  std::istringstream in("\n{not json\n");
  ScenarioReader reader(in);
  try {
    reader.next();
    FAIL();
  } catch (const FormatError & e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

// ---------------------------------------------------------------- validation

TEST(ScenarioValidation, TargetNeedsEnoughHistoryAndFuture)
{
  Scenario s = two_lane_scenario();
  EXPECT_NO_THROW(validate_scenario(s, 4, 12));
  EXPECT_THROW(validate_scenario(s, 5, 12), ScenarioError);
  EXPECT_THROW(validate_scenario(s, 4, 13), ScenarioError);
  s.target_agent_id = "ghost";
  EXPECT_THROW(validate_scenario(s, 4, 12), ScenarioError);
}

TEST(ScenarioValidation, TrackWindow)
{
  const auto t = track_along("a", {0, 0}, {1, 0}, 5, 4);
  const auto w = track_window(t, 6, 2);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ((*w)[0], (Point2{1, 0}));
  EXPECT_FALSE(track_window(t, 7, 3).has_value());
}

// ---------------------------------------------------------------- instances

TEST(Instance, NormalizesToTargetPresent)
{
  const auto inst = build_instance(two_lane_scenario(), {}, {});
  ASSERT_EQ(inst.past.size(), 4u);
  EXPECT_EQ(inst.past.back(), (Point2{0, 0}));
  EXPECT_EQ(inst.future.size(), 12u);
  EXPECT_EQ(inst.origin, (Point2{52, 103.5}));
  EXPECT_NEAR(inst.future[0].x, 4.0, 1e-12);
}

TEST(Instance, PadsMissingLanesWithZeros)
{
  const auto inst = build_instance(two_lane_scenario(), {}, {});
  ASSERT_EQ(inst.lanes.size(), 6u);
  EXPECT_EQ(inst.lane_valid, (std::vector<bool>{true, true, false, false, false, false}));
  for (std::size_t n = 2; n < 6; ++n) {
    ASSERT_EQ(inst.lanes[n].size(), 260u);
    for (const auto & p : inst.lanes[n]) {
      EXPECT_EQ(p, (Point2{0, 0}));
    }
    EXPECT_FALSE(inst.agent_valid[n]);
    for (const auto & p : inst.nearby_pasts[n]) {
      EXPECT_EQ(p, (Point2{0, 0}));
    }
  }
}

TEST(Instance, LabelsTheFollowedLaneAndPicksTheLeader)
{
  const auto inst = build_instance(two_lane_scenario(), {}, {});
  // The upper lane passes through the target, so it is the nearest seed.
  EXPECT_EQ(inst.ref_lane_index, 0);
  std::vector<std::vector<oracle::Xy>> lanes;
  for (const auto & l : valid_lanes(inst)) {
    std::vector<oracle::Xy> xy;
    for (const auto & p : l) {
      xy.push_back({p.x, p.y});
    }
    lanes.push_back(xy);
  }
  std::vector<oracle::Xy> fut;
  for (const auto & p : inst.future) {
    fut.push_back({p.x, p.y});
  }
  EXPECT_EQ(static_cast<std::size_t>(inst.ref_lane_index), oracle::label(fut, lanes, true));
  EXPECT_TRUE(inst.agent_valid[0]);
  EXPECT_NEAR(inst.nearby_pasts[0].back().x, 70 + 9 - 52, 1e-12);
  EXPECT_FALSE(inst.agent_valid[1]);
}

TEST(Instance, FollowsSecondLaneWhenFutureDoes)
{
  Scenario s = two_lane_scenario();
  // Target sits between the lanes, nearer the lower one, but drives on the upper one.
  s.agents[0] = track_along("ego", {40, 101.5}, {4, 0}, 0, 4);
  for (int k = 4; k < 16; ++k) {
    s.agents[0].states.push_back({k, 40.0 + 4.0 * k, 103.5});
  }
  const auto inst = build_instance(s, {}, {});
  EXPECT_EQ(inst.ref_lane_index, 1);
}

TEST(Instance, NoLaneIsRejected)
{
  Scenario s = two_lane_scenario();
  s.lanes = geom::LaneGraph({{"far", {{-100, 900}, {300, 900}}, {}, {}}});
  try {
    build_instance(s, {}, {});
    FAIL();
  } catch (const InstanceRejected & e) {
    EXPECT_EQ(e.reason(), "no-lane");
  }
}

TEST(Instance, WorldRoundTripAndJson)
{
  SyntheticConfig cfg;
  cfg.n_scenarios = 15;
  cfg.seed = 9;
  TempDir dir("inst");
  std::vector<PredictionInstance> all;
  for (const auto & s : generate_synthetic(cfg)) {
    const auto inst = build_instance(s, {}, {});
    const auto & track = *s.find_agent(s.target_agent_id);
    const auto world = *track_window(track, s.present_step - 3, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto back = inst.to_world(inst.past[i]);
      EXPECT_NEAR(back.x, world[i].x, 1e-9);
      EXPECT_NEAR(back.y, world[i].y, 1e-9);
    }
    all.push_back(inst);
  }
  write_instances(dir / "i.jsonl", all);
  EXPECT_EQ(load_instances(dir / "i.jsonl"), all);
}

TEST(Instance, PaddedLanesNeverChangeTheLabel)
{
  SyntheticConfig cfg;
  cfg.n_scenarios = 40;
  cfg.seed = 12;
  for (const auto & s : generate_synthetic(cfg)) {
    const auto inst = build_instance(s, {}, {});
    const auto lanes = valid_lanes(inst);
    EXPECT_EQ(static_cast<std::size_t>(inst.ref_lane_index),
      geom::label_reference_lane(inst.future, lanes, geom::EtaKind::kLinear));
    EXPECT_TRUE(inst.lane_valid[static_cast<std::size_t>(inst.ref_lane_index)]);
  }
}

// ---------------------------------------------------------------- synthetic

TEST(Synthetic, ZeroScenarios)
{
  SyntheticConfig cfg;
  cfg.n_scenarios = 0;
  EXPECT_TRUE(generate_synthetic(cfg).empty());
}

TEST(Synthetic, SameSeedSameOutput)
{
  SyntheticConfig cfg;
  cfg.n_scenarios = 25;
  cfg.seed = 77;
  EXPECT_EQ(generate_synthetic(cfg), generate_synthetic(cfg));
  auto other = cfg;
  other.seed = 78;
  EXPECT_NE(generate_synthetic(cfg), generate_synthetic(other));
}

TEST(Synthetic, EveryScenarioIsValidAndBuildable)
{
  for (const auto topo : {Topology::kStraight, Topology::kFork, Topology::kCurve, Topology::kMixed}) {
    SyntheticConfig cfg;
    cfg.n_scenarios = 60;
    cfg.lane_topology = topo;
    cfg.seed = 4;
    for (const auto & s : generate_synthetic(cfg)) {
      EXPECT_NO_THROW(validate_scenario(s, cfg.past_len, cfg.future_len));
      EXPECT_NO_THROW(build_instance(s, {}, {})) << s.scenario_id;
    }
  }
}

TEST(Synthetic, ForkHasABranchingSegment)
{
  SyntheticConfig cfg;
  cfg.n_scenarios = 30;
  cfg.lane_topology = Topology::kFork;
  for (const auto & s : generate_synthetic(cfg)) {
    bool branching = false;
    for (const auto & seg : s.lanes.segments()) {
      branching = branching || seg.successors.size() >= 2;
    }
    EXPECT_TRUE(branching) << s.scenario_id;
  }
}

TEST(Synthetic, NoiseFreeStraightFutureLiesOnItsLane)
{
  SyntheticConfig cfg;
  cfg.n_scenarios = 30;
  cfg.lane_topology = Topology::kStraight;
  cfg.noise_std_m = 0.0;
  for (const auto & s : generate_synthetic(cfg)) {
    const auto inst = build_instance(s, {}, {});
    const auto & ref = inst.lanes[static_cast<std::size_t>(inst.ref_lane_index)];
    for (const auto & p : inst.future) {
      // On the centerline itself; point-set distance is at most half a spacing.
      EXPECT_LT(geom::point_to_polyline_distance(p, ref), 1e-6);
      EXPECT_LE(geom::point_to_lane_distance(p, ref), 0.25 + 1e-9);
    }
    EXPECT_EQ(train::loss_lane_off_value(inst.future, inst.future, ref), 0.0);
  }
}

TEST(Synthetic, RejectsBadConfig)
{
  SyntheticConfig cfg;
  cfg.noise_std_m = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(topology_from_string("spiral"), std::invalid_argument);
  EXPECT_EQ(topology_from_string(to_string(Topology::kFork)), Topology::kFork);
}

}  // namespace
}  // namespace lanepred::scenario
