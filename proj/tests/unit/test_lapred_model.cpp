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
#include <random>
#include <string>
#include <vector>

#include "lanepred/model/batch.hpp"
#include "lanepred/model/lapred_model.hpp"
#include "lanepred/model/model_config.hpp"
#include "lanepred/nn/grad_check.hpp"
#include "lanepred/nn/ops.hpp"
#include "support/test_support.hpp"

namespace lanepred::model
{
namespace
{

using lanepred::testing::random_instance;
using nn::Shape;
using nn::Tensor;

ModelConfig small_config()
{
  ModelConfig cfg;
  cfg.num_lanes = 3;
  cfg.num_modes = 3;
  cfg.past_len = 4;
  cfg.future_len = 6;
  cfg.lane_points = 10;
  cfg.width_scale = 1.0 / 16;
  cfg.input_scale = 0.1;
  return cfg;
}

scenario::PredictionInstance instance_for(const ModelConfig & cfg, std::uint64_t seed, int valid = -1)
{
  std::mt19937_64 rng(seed);
  return random_instance(rng, cfg.num_lanes, cfg.lane_points, cfg.past_len, cfg.future_len, valid);
}

std::vector<double> values(const Tensor & t) { return {t.data().begin(), t.data().end()}; }

std::vector<double> row(const Tensor & t, std::size_t r)
{
  const std::size_t w = t.dim(-1);
  return {t.data().begin() + static_cast<std::ptrdiff_t>(r * w),
    t.data().begin() + static_cast<std::ptrdiff_t>((r + 1) * w)};
}

void copy_params(const Mlp & from, Mlp & to)
{
  nn::NamedParams a;
  nn::NamedParams b;
  from.collect("x", a);
  to.collect("x", b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::copy(a[i].second.data().begin(), a[i].second.data().end(), b[i].second.data_mut().begin());
  }
}

// ---------------------------------------------------------------- config

TEST(ModelConfig, DefaultDimsFollowTheLayerTables)
{
  const ModelConfig cfg;
  const auto d = cfg.dims();
  EXPECT_EQ(d.traj_lstm, 512u);
  EXPECT_EQ(d.lane_lstm, 2048u);
  EXPECT_EQ(d.tfe_concat(), 3072u);
  EXPECT_EQ(d.feature(), 1024u);
  EXPECT_EQ(d.mtp_input(), 1536u);
  EXPECT_EQ(d.tfe_fc, (std::vector<std::size_t>{2048, 2048, 1024, 1024}));
  EXPECT_EQ(d.la_fc, (std::vector<std::size_t>{512, 512, 256, 256, 64, 64}));
  EXPECT_EQ(d.mtp_head, (std::vector<std::size_t>{512, 512, 256}));
  EXPECT_EQ(cfg.num_lanes, 6);
  EXPECT_EQ(cfg.lane_points, 260);
  EXPECT_EQ(cfg.future_len, 12);
}

TEST(ModelConfig, WidthScaleKeepsRelationships)
{
  ModelConfig cfg;
  cfg.width_scale = 0.25;
  const auto d = cfg.dims();
  EXPECT_EQ(d.traj_lstm, 128u);
  EXPECT_EQ(d.lane_lstm, 512u);
  EXPECT_EQ(d.lane_conv_wide, 24u);
  EXPECT_EQ(d.tfe_concat(), 768u);
  EXPECT_EQ(d.mtp_input(), 384u);
  cfg.width_scale = 1e-6;
  for (const auto w : cfg.dims().la_fc) {
    EXPECT_GE(w, 1u);
  }
}

TEST(ModelConfig, ValidationAndJson)
{
  ModelConfig cfg;
  cfg.width_scale = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.selection = SelectionMode::kHard;
  cfg.agent_mode = AgentMode::kMultiLane;
  EXPECT_EQ(model_config_from_json(to_json(cfg)), cfg);
  EXPECT_THROW(model_config_from_json({{"lanes", 3}}), std::invalid_argument);
  auto other = cfg;
  other.num_modes = 7;
  EXPECT_EQ(first_difference(cfg, other), "num_modes");
  EXPECT_EQ(first_difference(cfg, cfg), "");
}

// ---------------------------------------------------------------- batch

TEST(Batch, ShapesAndPadding)
{
  const auto cfg = small_config();
  const auto a = instance_for(cfg, 1, 2);
  const auto b = instance_for(cfg, 2);
  const std::vector<const scenario::PredictionInstance *> ptrs{&a, &b};
  const auto batch = make_batch(ptrs, cfg);
  EXPECT_EQ(batch.past.shape(), (Shape{2, 4, 2}));
  EXPECT_EQ(batch.lanes.shape(), (Shape{6, 10, 2}));
  EXPECT_EQ(batch.future.shape(), (Shape{2, 6, 2}));
  EXPECT_EQ(batch.agent_groups.size(), 6u);
  // The padded lane of the first instance is all zeros.
  for (const double v : row(nn::reshape(batch.lanes, {6, 20}), 2)) {
    EXPECT_EQ(v, 0.0);
  }
  // Inputs are scaled, the target future is not.
  EXPECT_DOUBLE_EQ(batch.past.data()[0], a.past[0].x * 0.1);
  EXPECT_DOUBLE_EQ(batch.future.data()[0], a.future[0].x);
}

TEST(Batch, RejectsMismatchedInstances)
{
  auto cfg = small_config();
  auto inst = instance_for(cfg, 3);
  inst.future.pop_back();
  EXPECT_THROW(make_batch(inst, cfg), std::invalid_argument);
}

TEST(Batch, AblationZeroesLanesAndAgents)
{
  auto cfg = small_config();
  cfg.use_lanes = false;
  cfg.use_agents = false;
  const auto batch = make_batch(instance_for(cfg, 4), cfg);
  for (const double v : batch.lanes.data()) {
    EXPECT_EQ(v, 0.0);
  }
  for (const double v : batch.agents.data()) {
    EXPECT_EQ(v, 0.0);
  }
}

// ---------------------------------------------------------------- forward

TEST(Model, OutputShapesAndWeights)
{
  const auto cfg = small_config();
  const LaPredModel m(cfg, 5);
  const auto inst = instance_for(cfg, 6);
  const auto r = m.forward(make_batch(inst, cfg));
  const auto d = cfg.dims();
  EXPECT_EQ(r.features.xi.shape(), (Shape{1, 3, d.feature()}));
  EXPECT_EQ(r.features.xi_vp.shape(), (Shape{1, d.traj_lstm}));
  EXPECT_EQ(r.features.xi_li.shape(), (Shape{3, d.lane_lstm}));
  EXPECT_EQ(r.features.xi_vi.shape(), (Shape{3, d.traj_lstm}));
  EXPECT_EQ(r.lane_weights.shape(), (Shape{1, 3}));
  EXPECT_EQ(r.trajectories.shape(), (Shape{1, 3, 6, 2}));
  const auto out = predict(m, inst);
  EXPECT_EQ(out.trajectories.size(), 3u);
  EXPECT_EQ(out.trajectories[0].size(), 6u);
}

TEST(Model, WeightsArePositiveAndSumToOne)
{
  const auto cfg = small_config();
  const LaPredModel m(cfg, 7);
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto inst = instance_for(cfg, 100 + s, 1 + static_cast<int>(s % 3));
    const auto out = predict(m, inst);
    double sum = 0.0;
    for (const double w : out.lane_weights) {
      EXPECT_GT(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (const auto & traj : out.trajectories) {
      for (const auto & p : traj) {
        EXPECT_TRUE(std::isfinite(p.x) && std::isfinite(p.y));
      }
    }
  }
}

TEST(Model, ZeroInputsAndBiasesGiveZeroFeatures)
{
  const auto cfg = small_config();
  LaPredModel m(cfg, 8);
  for (auto & [name, t] : m.parameters()) {
    if (name.size() >= 4 && name.compare(name.size() - 4, 4, "bias") == 0) {
      nn::zero_parameters({{name, t}});
    }
  }
  scenario::PredictionInstance inst = instance_for(cfg, 9);
  for (auto & p : inst.past) {
    p = {};
  }
  for (auto & lane : inst.lanes) {
    for (auto & p : lane) {
      p = {};
    }
  }
  for (auto & a : inst.nearby_pasts) {
    for (auto & p : a) {
      p = {};
    }
  }
  nn::NoGradGuard g;
  const auto f = m.tfe_forward(make_batch(inst, cfg));
  for (const double v : f.xi.data()) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(Model, LaneEncoderSharedAcrossLanes)
{
  const auto cfg = small_config();
  const LaPredModel m(cfg, 10);
  auto inst = instance_for(cfg, 11);
  nn::NoGradGuard g;
  const auto f = m.tfe_forward(make_batch(inst, cfg));
  EXPECT_NE(row(nn::reshape(f.xi, {3, f.xi.dim(2)}), 0), row(nn::reshape(f.xi, {3, f.xi.dim(2)}), 1));

  // Swapping two lanes (with their agents) swaps their features exactly.
  auto swapped = inst;
  std::swap(swapped.lanes[0], swapped.lanes[2]);
  std::swap(swapped.nearby_pasts[0], swapped.nearby_pasts[2]);
  const auto f2 = m.tfe_forward(make_batch(swapped, cfg));
  const auto x1 = nn::reshape(f.xi, {3, f.xi.dim(2)});
  const auto x2 = nn::reshape(f2.xi, {3, f2.xi.dim(2)});
  // Row position inside the batched products may change rounding in the last bits.
  const std::size_t perm[3] = {2, 1, 0};
  for (std::size_t n = 0; n < 3; ++n) {
    const auto a = row(x1, n);
    const auto b = row(x2, perm[n]);
    for (std::size_t j = 0; j < a.size(); ++j) {
      EXPECT_NEAR(a[j], b[j], 1e-12);
    }
  }
  EXPECT_EQ(values(f.xi_vp), values(f2.xi_vp));
}

TEST(Model, AttentionWithForcedLogits)
{
  auto cfg = small_config();
  cfg.num_lanes = 2;
  LaPredModel m(cfg, 12);
  nn::NamedParams la;
  m.attention().collect("la", la);
  nn::zero_parameters(la);
  auto bias = m.attention().layers.back().bias.data_mut();
  bias[0] = 0.0;
  bias[1] = std::log(3.0);
  const auto out = predict(m, instance_for(cfg, 13));
  EXPECT_NEAR(out.lane_weights[0], 0.25, 1e-15);
  EXPECT_NEAR(out.lane_weights[1], 0.75, 1e-15);
}

TEST(Model, AggregateSoftAndHard)
{
  auto cfg = small_config();
  cfg.num_lanes = 2;
  const auto xi = Tensor::from_data({1, 2, 3}, {1, 1, 1, 3, 3, 3});
  const auto w = Tensor::from_data({1, 2}, {0.25, 0.75});
  const LaPredModel soft(cfg, 1);
  EXPECT_EQ(values(soft.aggregate(xi, w)), (std::vector<double>{2.5, 2.5, 2.5}));
  cfg.selection = SelectionMode::kHard;
  const LaPredModel hard(cfg, 1);
  EXPECT_EQ(values(hard.aggregate(xi, w)), (std::vector<double>{3, 3, 3}));
  // Hard equals soft evaluated at the one-hot argmax.
  EXPECT_EQ(values(hard.aggregate(xi, w)),
    values(soft.aggregate(xi, Tensor::from_data({1, 2}, {0, 1}))));
  // Ties go to the first lane.
  EXPECT_EQ(values(hard.aggregate(xi, Tensor::from_data({1, 2}, {0.5, 0.5}))),
    (std::vector<double>{1, 1, 1}));
  // One-hot weights pick the lane in both modes.
  const auto onehot = Tensor::from_data({1, 2}, {1, 0});
  EXPECT_EQ(values(soft.aggregate(xi, onehot)), values(hard.aggregate(xi, onehot)));
}

TEST(Model, HardOutputIsOneOfTheLaneFeatures)
{
  auto cfg = small_config();
  cfg.selection = SelectionMode::kHard;
  const LaPredModel m(cfg, 14);
  nn::NoGradGuard g;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto r = m.forward(make_batch(instance_for(cfg, 200 + s), cfg));
    const auto xi = nn::reshape(r.features.xi, {3, r.features.xi.dim(2)});
    const auto agg = values(r.aggregated);
    EXPECT_TRUE(agg == row(xi, 0) || agg == row(xi, 1) || agg == row(xi, 2));
  }
}

TEST(Model, IdenticalHeadsGiveIdenticalHypotheses)
{
  const auto cfg = small_config();
  LaPredModel m(cfg, 15);
  for (std::size_t k = 1; k < m.mode_heads().size(); ++k) {
    copy_params(m.mode_heads()[0], m.mode_heads()[k]);
  }
  const auto out = predict(m, instance_for(cfg, 16));
  for (std::size_t k = 1; k < out.trajectories.size(); ++k) {
    EXPECT_EQ(out.trajectories[k], out.trajectories[0]);
  }
}

TEST(Model, AgentModesAgreeOnASingleAgent)
{
  auto cfg = small_config();
  cfg.num_lanes = 1;
  auto inst = instance_for(cfg, 17);
  ASSERT_EQ(inst.context_agents.size(), 1u);
  ASSERT_EQ(inst.context_agents[0].past, inst.nearby_pasts[0]);
  std::vector<std::vector<geom::Point2>> outs;
  for (const auto mode : {AgentMode::kSingleLane, AgentMode::kMultiLane, AgentMode::kMulti}) {
    cfg.agent_mode = mode;
    const LaPredModel m(cfg, 18);
    outs.push_back(predict(m, inst).trajectories[0]);
  }
  EXPECT_EQ(outs[0], outs[1]);
  EXPECT_EQ(outs[0], outs[2]);
}

TEST(Model, SingleAndMultiLaneAgreeWithOneAgentPerLane)
{
  auto cfg = small_config();
  auto inst = instance_for(cfg, 19);
  cfg.agent_mode = AgentMode::kSingleLane;
  const auto a = predict(LaPredModel(cfg, 20), inst);
  cfg.agent_mode = AgentMode::kMultiLane;
  const auto b = predict(LaPredModel(cfg, 20), inst);
  EXPECT_EQ(a.trajectories, b.trajectories);
  EXPECT_EQ(a.lane_weights, b.lane_weights);
}

TEST(Model, ForwardIsDeterministic)
{
  const auto cfg = small_config();
  const auto inst = instance_for(cfg, 21);
  const auto a = predict(LaPredModel(cfg, 22), inst);
  const auto b = predict(LaPredModel(cfg, 22), inst);
  EXPECT_EQ(a.trajectories, b.trajectories);
  EXPECT_EQ(a.lane_weights, b.lane_weights);
  const auto c = predict(LaPredModel(cfg, 23), inst);
  EXPECT_NE(a.trajectories, c.trajectories);
}

TEST(Model, MaskedLanesGetNoWeight)
{
  auto cfg = small_config();
  cfg.mask_invalid_lanes = true;
  const auto out = predict(LaPredModel(cfg, 24), instance_for(cfg, 25, 1));
  EXPECT_NEAR(out.lane_weights[0], 1.0, 1e-12);
  EXPECT_LT(out.lane_weights[1], 1e-12);
}

// ---------------------------------------------------------------- gradients

// Gradient reaching each lane feature through the aggregation alone.
std::vector<double> feature_grad_norms(const ModelConfig & cfg, std::uint64_t seed)
{
  const LaPredModel m(cfg, seed);
  const auto batch = make_batch(instance_for(cfg, seed + 1), cfg);
  const auto r = m.forward(batch);
  auto xi = r.features.xi.detach();
  xi.set_requires_grad(true);
  const auto w = r.lane_weights.detach();
  const auto traj = m.mtp_forward(m.aggregate(xi, w), r.features.xi_vp.detach());
  nn::sum(nn::mul(traj, traj)).backward();
  std::vector<double> norms(3, 0.0);
  const std::size_t F = xi.dim(2);
  for (std::size_t n = 0; n < 3; ++n) {
    for (std::size_t j = 0; j < F; ++j) {
      norms[n] += std::abs(xi.grad()[n * F + j]);
    }
  }
  return norms;
}

TEST(ModelGradient, SoftSelectionReachesEveryLane)
{
  const auto norms = feature_grad_norms(small_config(), 30);
  for (const double v : norms) {
    EXPECT_GT(v, 0.0);
  }
}

TEST(ModelGradient, HardSelectionReachesOnlyTheChosenLane)
{
  auto cfg = small_config();
  cfg.selection = SelectionMode::kHard;
  const auto norms = feature_grad_norms(cfg, 31);
  int nonzero = 0;
  for (const double v : norms) {
    nonzero += v > 0.0 ? 1 : 0;
  }
  EXPECT_EQ(nonzero, 1);
}

TEST(ModelGradient, FullModelMatchesFiniteDifferences)
{
  auto cfg = small_config();
  cfg.width_scale = 1.0 / 32;
  const LaPredModel m(cfg, 32);
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-1, 1);
  // Zero-initialized biases can leave a pre-activation exactly on the ReLU
  // kink; check at a generic point instead.
  for (auto & [name, t] : m.parameters()) {
    if (name.find("bias") != std::string::npos) {
      for (auto & v : t.data_mut()) {
        v = 0.05 * u(rng);
      }
    }
  }
  const auto inst = instance_for(cfg, 33);
  const auto batch = make_batch(inst, cfg);
  std::vector<double> proj(3 * 6 * 2);
  for (auto & v : proj) {
    v = u(rng);
  }
  const auto R = Tensor::from_data({1, 3, 6, 2}, proj);
  auto f = [&] {
    const auto r = m.forward(batch);
    return nn::add(nn::scale(nn::sum(nn::mul(r.trajectories, R)), 0.01),
      nn::cross_entropy(r.lane_weights, {1}));
  };
  // Every parameter tensor of the smaller modules, plus representative encoder ones.
  std::vector<Tensor> checked;
  for (const auto & [name, t] : m.parameters()) {
    if (name.rfind("mtp.", 0) == 0 || name.rfind("la.", 0) == 0 ||
      name.find("conv1") != std::string::npos || name.find("lstm.w_hh") != std::string::npos ||
      name.find("lstm.bias") != std::string::npos)
    {
      checked.push_back(t);
    }
  }
  ASSERT_GT(checked.size(), 10u);
  // Activations are small at this width, so keep the step well inside the
  // distance to the nearest ReLU kink.
  nn::GradCheckOptions opts;
  opts.step = 1e-5;
  const auto report = nn::grad_check(f, checked, opts);
  EXPECT_LT(report.max_rel_error, 1e-4)
    << "input " << report.worst_input << " index " << report.worst_index << " analytic "
    << report.worst_analytic << " numeric " << report.worst_numeric;
}

}  // namespace
}  // namespace lanepred::model
