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

#ifndef LANEPRED__TRAIN__LOSSES_HPP_
#define LANEPRED__TRAIN__LOSSES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "lanepred/geom_map/lane_candidates.hpp"
#include "lanepred/model/batch.hpp"
#include "lanepred/model/lapred_model.hpp"
#include "lanepred/nn/tensor.hpp"

namespace lanepred::train
{

struct LossConfig
{
  double alpha{0.3};  // weight of the regression term against lane classification
  double beta{0.7};   // weight of position error against the lane-off penalty
  geom::EtaKind eta{geom::EtaKind::kLinear};

  void validate() const;
};

/// Batch means of the loss terms, evaluated at each instance's winning hypothesis.
struct LossComponents
{
  double pos{0.0};
  double lane_off{0.0};
  double cls{0.0};
  double pred{0.0};
  double total{0.0};
};

// Plain-value forms for one hypothesis of one instance.
double loss_pos_value(std::span<const geom::Point2> pred, std::span<const geom::Point2> gt);
double loss_lane_off_value(
  std::span<const geom::Point2> pred, std::span<const geom::Point2> gt,
  std::span<const geom::Point2> ref_lane);
double loss_cls_value(std::span<const double> weights, std::size_t ref, double floor = 1e-12);

/// Mean smooth L1 over all coordinates; pred and gt are [B x h x 2].
nn::Tensor loss_pos(const nn::Tensor & pred, const nn::Tensor & gt);

/**
 * @brief Lane-off penalty averaged over steps and then over the batch.
 *
 * A predicted point contributes its distance to the nearest point of its
 * instance's reference lane when that exceeds the ground-truth point's
 * distance. The gradient treats the nearest lane point as fixed.
 */
nn::Tensor loss_lane_off(
  const nn::Tensor & pred, const nn::Tensor & gt,
  const std::vector<std::span<const geom::Point2>> & ref_lanes);

/// Mean cross-entropy of the lane weights [B x N] against the reference lanes.
nn::Tensor loss_cls(const nn::Tensor & weights, const std::vector<std::size_t> & ref);

struct LossResult
{
  nn::Tensor total;                  // scalar with graph
  std::vector<std::size_t> winners;  // per instance
  LossComponents components;
};

/// Winner-takes-all total loss for a batch; ties go to the smallest hypothesis index.
LossResult loss_total(
  const model::ForwardResult & out, const model::Batch & batch, const LossConfig & cfg);

struct InstanceLoss
{
  double total{0.0};
  std::size_t winner{0};
  LossComponents components;
};

/// Value-only loss of one detached prediction.
InstanceLoss loss_total(
  const model::PredictionOutput & out, const scenario::PredictionInstance & inst,
  const LossConfig & cfg);

}  // namespace lanepred::train

#endif  // LANEPRED__TRAIN__LOSSES_HPP_
