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

#ifndef LANEPRED__MODEL__BATCH_HPP_
#define LANEPRED__MODEL__BATCH_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "lanepred/model/model_config.hpp"
#include "lanepred/nn/tensor.hpp"
#include "lanepred/scenario/instance.hpp"

namespace lanepred::model
{

/**
 * @brief Network inputs for a group of instances, already scaled.
 *
 * Lane rows are ordered instance-major (row b * N + n). Agent rows are a flat
 * list; agent_groups[b * N + n] names the rows pooled into lane n of
 * instance b. A lane without agents gets one zero row.
 */
struct Batch
{
  std::size_t size{0};
  std::size_t num_lanes{0};
  nn::Tensor past;    // [B x P x 2]
  nn::Tensor lanes;   // [B*N x M x 2]
  nn::Tensor agents;  // [R x P x 2]
  std::vector<std::vector<std::size_t>> agent_groups;  // B*N
  std::vector<bool> lane_valid;                        // B*N
  nn::Tensor future;                                   // [B x h x 2], metres
  std::vector<std::size_t> ref_lane;                   // B
  std::vector<const scenario::PredictionInstance *> instances;
};

/// Throws std::invalid_argument when an instance does not match the config shapes.
void check_instance(const scenario::PredictionInstance & inst, const ModelConfig & cfg);

Batch make_batch(
  std::span<const scenario::PredictionInstance * const> instances, const ModelConfig & cfg);
Batch make_batch(const scenario::PredictionInstance & inst, const ModelConfig & cfg);

}  // namespace lanepred::model

#endif  // LANEPRED__MODEL__BATCH_HPP_
