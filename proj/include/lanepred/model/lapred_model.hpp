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

#ifndef LANEPRED__MODEL__LAPRED_MODEL_HPP_
#define LANEPRED__MODEL__LAPRED_MODEL_HPP_

#include <cstdint>
#include <vector>

#include "lanepred/model/batch.hpp"
#include "lanepred/model/model_config.hpp"
#include "lanepred/nn/layers.hpp"
#include "lanepred/nn/tensor.hpp"

namespace lanepred::model
{

/// Per-lane trajectory-lane features for a batch.
struct LaneFeatures
{
  nn::Tensor xi;     // [B x N x F] joint feature per lane
  nn::Tensor xi_vp;  // [B x T] target past
  nn::Tensor xi_li;  // [B*N x L] lane
  nn::Tensor xi_vi;  // [B*N x T] nearby agents, pooled per lane
};

struct ForwardResult
{
  LaneFeatures features;
  nn::Tensor lane_weights;  // [B x N]
  nn::Tensor aggregated;    // [B x F]
  nn::Tensor trajectories;  // [B x K x h x 2], metres, target frame
};

/// One instance's prediction, detached from the graph.
struct PredictionOutput
{
  std::vector<std::vector<geom::Point2>> trajectories;  // K x h
  std::vector<double> lane_weights;                      // N
  std::vector<double> aggregated_xi;                     // F
};

/// Encoder for a short trajectory: two u{c}-k2-s1-p0 convolutions, then an LSTM.
struct TrajectoryEncoder
{
  nn::Conv1dLayer conv1;
  nn::Conv1dLayer conv2;
  nn::LstmLayer lstm;

  static TrajectoryEncoder create(std::size_t conv, std::size_t hidden, nn::Rng & rng);
  nn::Tensor forward(const nn::Tensor & x) const;  // [R x P x 2] -> [R x hidden]
  void collect(const std::string & prefix, nn::NamedParams & out) const;
};

/// Lane encoder: u{c}-k3-s1-p1 twice, u{w}-k3-s1-p1 twice, then an LSTM.
struct LaneEncoder
{
  std::vector<nn::Conv1dLayer> convs;
  nn::LstmLayer lstm;

  static LaneEncoder create(
    std::size_t conv, std::size_t wide, std::size_t hidden, nn::Rng & rng);
  nn::Tensor forward(const nn::Tensor & x) const;  // [R x M x 2] -> [R x hidden]
  void collect(const std::string & prefix, nn::NamedParams & out) const;
};

/// Stack of linear layers with ReLU after all but (optionally) the last.
struct Mlp
{
  std::vector<nn::LinearLayer> layers;
  bool relu_last{true};

  static Mlp create(
    std::size_t in, const std::vector<std::size_t> & widths, bool relu_last, nn::Rng & rng);
  nn::Tensor forward(const nn::Tensor & x) const;
  void collect(const std::string & prefix, nn::NamedParams & out) const;
};

/**
 * @brief Lane-aware multi-hypothesis trajectory predictor.
 *
 * Each lane candidate is encoded jointly with the target's past and that
 * lane's nearby agent into a feature (TFE). An attention network scores the
 * concatenated lane features (LA); features are combined by those weights, or
 * the top lane is taken in hard mode. K decoder heads read the combined
 * feature together with the past encoding and share a final trunk (MTP).
 */
class LaPredModel
{
public:
  LaPredModel(const ModelConfig & cfg, std::uint64_t seed);

  const ModelConfig & config() const { return cfg_; }
  const ModelDims & dims() const { return dims_; }

  /// Parameters in a fixed order; the handles alias the model's storage.
  nn::NamedParams parameters() const;
  std::vector<nn::Tensor> parameter_tensors() const;

  LaneFeatures tfe_forward(const Batch & batch) const;
  /// [B x N x F] -> [B x N] softmax weights.
  nn::Tensor la_forward(const nn::Tensor & xi, const Batch & batch) const;
  /// Soft: weighted sum. Hard: the argmax lane's feature (smallest index on ties).
  nn::Tensor aggregate(const nn::Tensor & xi, const nn::Tensor & weights) const;
  /// [B x F], [B x T] -> [B x K x h x 2].
  nn::Tensor mtp_forward(const nn::Tensor & xi, const nn::Tensor & xi_vp) const;

  ForwardResult forward(const Batch & batch) const;

  TrajectoryEncoder & past_encoder() { return past_enc_; }
  TrajectoryEncoder & agent_encoder() { return agent_enc_; }
  LaneEncoder & lane_encoder() { return lane_enc_; }
  Mlp & tfe_head() { return tfe_fc_; }
  Mlp & attention() { return la_; }
  std::vector<Mlp> & mode_heads() { return heads_; }
  Mlp & shared_trunk() { return trunk_; }

private:
  ModelConfig cfg_;
  ModelDims dims_;
  TrajectoryEncoder past_enc_;
  TrajectoryEncoder agent_enc_;
  LaneEncoder lane_enc_;
  Mlp tfe_fc_;
  Mlp la_;
  std::vector<Mlp> heads_;
  Mlp trunk_;
};

std::vector<PredictionOutput> unpack(const ForwardResult & r);

/// Single-instance inference without recording a graph.
PredictionOutput predict(const LaPredModel & model, const scenario::PredictionInstance & inst);

}  // namespace lanepred::model

#endif  // LANEPRED__MODEL__LAPRED_MODEL_HPP_
