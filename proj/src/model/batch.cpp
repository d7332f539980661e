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

#include "lanepred/model/batch.hpp"

#include <stdexcept>
#include <string>

namespace lanepred::model
{

namespace
{

void append_points(std::vector<double> & out, const geom::Polyline & line, double s)
{
  for (const auto & p : line) {
    out.push_back(p.x * s);
    out.push_back(p.y * s);
  }
}

void append_zeros(std::vector<double> & out, std::size_t points)
{
  out.insert(out.end(), 2 * points, 0.0);
}

}  // namespace

void check_instance(const scenario::PredictionInstance & inst, const ModelConfig & cfg)
{
  auto fail = [&](const std::string & what) {
    throw std::invalid_argument("instance '" + inst.instance_id + "': " + what);
  };
  if (inst.past_len() != cfg.past_len) {
    fail("past has " + std::to_string(inst.past_len()) + " points, model expects " +
      std::to_string(cfg.past_len));
  }
  if (inst.future_len() != cfg.future_len) {
    fail("future has " + std::to_string(inst.future_len()) + " points, model expects " +
      std::to_string(cfg.future_len));
  }
  if (inst.num_lanes() != cfg.num_lanes) {
    fail("has " + std::to_string(inst.num_lanes()) + " lane slots, model expects " +
      std::to_string(cfg.num_lanes));
  }
  if (inst.lane_points() != cfg.lane_points) {
    fail("lanes have " + std::to_string(inst.lane_points()) + " points, model expects " +
      std::to_string(cfg.lane_points));
  }
}

Batch make_batch(
  std::span<const scenario::PredictionInstance * const> instances, const ModelConfig & cfg)
{
  if (instances.empty()) {
    throw std::invalid_argument("empty batch");
  }
  const std::size_t B = instances.size();
  const std::size_t N = static_cast<std::size_t>(cfg.num_lanes);
  const std::size_t P = static_cast<std::size_t>(cfg.past_len);
  const std::size_t M = static_cast<std::size_t>(cfg.lane_points);
  const std::size_t h = static_cast<std::size_t>(cfg.future_len);
  const double s = cfg.input_scale;

  Batch batch;
  batch.size = B;
  batch.num_lanes = N;
  std::vector<double> past;
  std::vector<double> lanes;
  std::vector<double> agents;
  std::vector<double> future;
  past.reserve(B * P * 2);
  lanes.reserve(B * N * M * 2);
  future.reserve(B * h * 2);
  std::size_t rows = 0;

  for (const auto * inst : instances) {
    check_instance(*inst, cfg);
    batch.instances.push_back(inst);
    batch.ref_lane.push_back(static_cast<std::size_t>(inst->ref_lane_index));
    append_points(past, inst->past, s);
    append_points(future, inst->future, 1.0);

    std::vector<std::vector<const geom::Polyline *>> per_lane(N);
    if (cfg.use_agents) {
      switch (cfg.agent_mode) {
        case AgentMode::kSingleLane:
          for (std::size_t n = 0; n < N; ++n) {
            if (inst->agent_valid[n]) {
              per_lane[n].push_back(&inst->nearby_pasts[n]);
            }
          }
          break;
        case AgentMode::kMultiLane:
          for (const auto & a : inst->context_agents) {
            if (a.lane >= 0 && static_cast<std::size_t>(a.lane) < N &&
              per_lane[static_cast<std::size_t>(a.lane)].size() <
              static_cast<std::size_t>(cfg.ml_agent_cap))
            {
              per_lane[static_cast<std::size_t>(a.lane)].push_back(&a.past);
            }
          }
          break;
        case AgentMode::kMulti:
          for (std::size_t n = 0; n < N; ++n) {
            for (const auto & a : inst->context_agents) {
              per_lane[n].push_back(&a.past);
            }
          }
          break;
      }
    }

    for (std::size_t n = 0; n < N; ++n) {
      const bool valid = inst->lane_valid[n];
      batch.lane_valid.push_back(valid);
      if (valid && cfg.use_lanes) {
        append_points(lanes, inst->lanes[n], s);
      } else {
        append_zeros(lanes, M);
      }
      std::vector<std::size_t> group;
      for (const auto * a : per_lane[n]) {
        append_points(agents, *a, s);
        group.push_back(rows++);
      }
      if (group.empty()) {
        append_zeros(agents, P);
        group.push_back(rows++);
      }
      batch.agent_groups.push_back(std::move(group));
    }
  }
  batch.past = nn::Tensor::from_data({B, P, 2}, std::move(past));
  batch.lanes = nn::Tensor::from_data({B * N, M, 2}, std::move(lanes));
  batch.agents = nn::Tensor::from_data({rows, P, 2}, std::move(agents));
  batch.future = nn::Tensor::from_data({B, h, 2}, std::move(future));
  return batch;
}

Batch make_batch(const scenario::PredictionInstance & inst, const ModelConfig & cfg)
{
  const scenario::PredictionInstance * ptr = &inst;
  return make_batch(std::span<const scenario::PredictionInstance * const>(&ptr, 1), cfg);
}

}  // namespace lanepred::model
