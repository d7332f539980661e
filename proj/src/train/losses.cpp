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

#include "lanepred/train/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lanepred/nn/ops.hpp"

namespace lanepred::train
{

void LossConfig::validate() const
{
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("beta must lie in [0, 1]");
  }
}

double loss_pos_value(std::span<const geom::Point2> pred, std::span<const geom::Point2> gt)
{
  if (pred.size() != gt.size() || pred.empty()) {
    throw std::invalid_argument("loss_pos: prediction and ground truth lengths differ");
  }
  auto sl1 = [](double d) {
    const double a = std::abs(d);
    return a < 1.0 ? 0.5 * d * d : a - 0.5;
  };
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    acc += sl1(pred[i].x - gt[i].x) + sl1(pred[i].y - gt[i].y);
  }
  return acc / static_cast<double>(2 * pred.size());
}

double loss_lane_off_value(
  std::span<const geom::Point2> pred, std::span<const geom::Point2> gt,
  std::span<const geom::Point2> ref_lane)
{
  if (pred.size() != gt.size() || pred.empty()) {
    throw std::invalid_argument("loss_lane_off: prediction and ground truth lengths differ");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double dp = geom::point_to_lane_distance(pred[i], ref_lane);
    const double dg = geom::point_to_lane_distance(gt[i], ref_lane);
    if (dp > dg) {
      acc += dp;
    }
  }
  return acc / static_cast<double>(pred.size());
}

double loss_cls_value(std::span<const double> weights, std::size_t ref, double floor)
{
  if (ref >= weights.size()) {
    throw std::out_of_range("loss_cls: reference index out of range");
  }
  return -std::log(std::max(weights[ref], floor));
}

nn::Tensor loss_pos(const nn::Tensor & pred, const nn::Tensor & gt)
{
  return nn::smooth_l1(pred, gt);
}

nn::Tensor loss_lane_off(
  const nn::Tensor & pred, const nn::Tensor & gt,
  const std::vector<std::span<const geom::Point2>> & ref_lanes)
{
  if (pred.shape() != gt.shape() || pred.rank() != 3 || pred.dim(2) != 2) {
    throw nn::ShapeError("loss_lane_off: expected matching [B x h x 2] tensors");
  }
  const std::size_t B = pred.dim(0);
  const std::size_t h = pred.dim(1);
  if (ref_lanes.size() != B) {
    throw nn::ShapeError("loss_lane_off: one reference lane per instance required");
  }
  const auto p = pred.data();
  const auto g = gt.data();
  // Unit direction from the nearest lane point for every active term.
  std::vector<double> slope(B * h * 2, 0.0);
  double acc = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < h; ++i) {
      const std::size_t o = (b * h + i) * 2;
      const geom::Point2 pp{p[o], p[o + 1]};
      const geom::Point2 gp{g[o], g[o + 1]};
      const auto near = geom::nearest_lane_point(pp, ref_lanes[b]);
      const double dg = geom::point_to_lane_distance(gp, ref_lanes[b]);
      if (near.distance > dg) {
        acc += near.distance;
        const geom::Point2 q = ref_lanes[b][near.index];
        slope[o] = (pp.x - q.x) / near.distance;
        slope[o + 1] = (pp.y - q.y) / near.distance;
      }
    }
  }
  const double denom = static_cast<double>(B * h);
  return nn::Tensor::make_result(
    {1}, {acc / denom}, {pred}, [slope = std::move(slope), denom](nn::detail::Node & self) {
      auto & gp = self.parents[0]->grad;
      const double s = self.grad[0] / denom;
      for (std::size_t i = 0; i < slope.size(); ++i) {
        gp[i] += s * slope[i];
      }
    });
}

nn::Tensor loss_cls(const nn::Tensor & weights, const std::vector<std::size_t> & ref)
{
  return nn::cross_entropy(weights, ref);
}

LossResult loss_total(
  const model::ForwardResult & out, const model::Batch & batch, const LossConfig & cfg)
{
  cfg.validate();
  const auto & traj = out.trajectories;
  const std::size_t B = traj.dim(0);
  const std::size_t K = traj.dim(1);
  const std::size_t h = traj.dim(2);
  const auto t = traj.data();
  const auto gt = batch.future.data();

  LossResult r;
  std::vector<std::span<const geom::Point2>> lanes;
  std::vector<std::size_t> rows;
  std::vector<geom::Point2> pred(h);
  std::vector<geom::Point2> truth(h);
  for (std::size_t b = 0; b < B; ++b) {
    const auto * inst = batch.instances[b];
    const std::span<const geom::Point2> lane = inst->lanes[batch.ref_lane[b]];
    lanes.push_back(lane);
    for (std::size_t i = 0; i < h; ++i) {
      truth[i] = {gt[(b * h + i) * 2], gt[(b * h + i) * 2 + 1]};
    }
    double best = std::numeric_limits<double>::infinity();
    std::size_t winner = 0;
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < h; ++i) {
        const std::size_t o = ((b * K + k) * h + i) * 2;
        pred[i] = {t[o], t[o + 1]};
      }
      const double l = cfg.beta * loss_pos_value(pred, truth) +
        (1.0 - cfg.beta) * loss_lane_off_value(pred, truth, lane);
      if (l < best) {
        best = l;
        winner = k;
      }
    }
    r.winners.push_back(winner);
    rows.push_back(b * K + winner);
  }

  const auto chosen = nn::reshape(
    nn::take_rows(nn::reshape(traj, {B * K, h, 2}), rows), {B, h, 2});
  const auto pos = loss_pos(chosen, batch.future);
  const auto off = loss_lane_off(chosen, batch.future, lanes);
  const auto cls = loss_cls(out.lane_weights, batch.ref_lane);
  const auto pred_term = nn::add(nn::scale(pos, cfg.beta), nn::scale(off, 1.0 - cfg.beta));
  r.total = nn::add(nn::scale(pred_term, cfg.alpha), nn::scale(cls, 1.0 - cfg.alpha));
  r.components.pos = pos.item();
  r.components.lane_off = off.item();
  r.components.cls = cls.item();
  r.components.pred = pred_term.item();
  r.components.total = r.total.item();
  return r;
}

InstanceLoss loss_total(
  const model::PredictionOutput & out, const scenario::PredictionInstance & inst,
  const LossConfig & cfg)
{
  cfg.validate();
  const std::span<const geom::Point2> lane =
    inst.lanes.at(static_cast<std::size_t>(inst.ref_lane_index));
  InstanceLoss r;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < out.trajectories.size(); ++k) {
    const double pos = loss_pos_value(out.trajectories[k], inst.future);
    const double off = loss_lane_off_value(out.trajectories[k], inst.future, lane);
    const double l = cfg.beta * pos + (1.0 - cfg.beta) * off;
    if (l < best) {
      best = l;
      r.winner = k;
      r.components.pos = pos;
      r.components.lane_off = off;
      r.components.pred = l;
    }
  }
  r.components.cls = loss_cls_value(
    out.lane_weights, static_cast<std::size_t>(inst.ref_lane_index));
  r.components.total = cfg.alpha * r.components.pred + (1.0 - cfg.alpha) * r.components.cls;
  r.total = r.components.total;
  return r;
}

}  // namespace lanepred::train
