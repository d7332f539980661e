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

#ifndef LANEPRED__MODEL__MODEL_CONFIG_HPP_
#define LANEPRED__MODEL__MODEL_CONFIG_HPP_

#include <cstddef>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace lanepred::model
{

enum class SelectionMode
{
  kSoft,
  kHard,
};

/// SL: one selected agent per lane. ML: max-pool of the agents on each lane.
/// M: max-pool of all agents, shared by every lane.
enum class AgentMode
{
  kSingleLane,
  kMultiLane,
  kMulti,
};

std::string to_string(SelectionMode m);
std::string to_string(AgentMode m);
SelectionMode selection_from_string(const std::string & s);
AgentMode agent_mode_from_string(const std::string & s);

/// Layer widths after width scaling.
struct ModelDims
{
  std::size_t traj_conv;        // 64
  std::size_t traj_lstm;        // 512
  std::size_t lane_conv;        // 64
  std::size_t lane_conv_wide;   // 96
  std::size_t lane_lstm;        // 2048
  std::vector<std::size_t> tfe_fc;      // 2048, 2048, 1024, 1024
  std::vector<std::size_t> la_fc;       // 512, 512, 256, 256, 64, 64
  std::vector<std::size_t> mtp_head;    // 512, 512, 256
  std::vector<std::size_t> mtp_shared;  // 256

  std::size_t tfe_concat() const { return traj_lstm + lane_lstm + traj_lstm; }
  std::size_t feature() const { return tfe_fc.back(); }
  std::size_t mtp_input() const { return feature() + traj_lstm; }
};

struct ModelConfig
{
  int num_lanes{6};
  int num_modes{5};
  int past_len{4};
  int future_len{12};
  int lane_points{260};
  double width_scale{1.0};
  SelectionMode selection{SelectionMode::kSoft};
  AgentMode agent_mode{AgentMode::kSingleLane};
  bool mask_invalid_lanes{false};
  bool use_lanes{true};
  bool use_agents{true};
  int ml_agent_cap{4};
  /// Input coordinates are multiplied by this; outputs are divided by it.
  double input_scale{1.0};

  ModelDims dims() const;
  void validate() const;

  bool operator==(const ModelConfig &) const = default;
};

nlohmann::json to_json(const ModelConfig & cfg);
/// Missing keys keep their defaults; unknown keys throw std::invalid_argument.
ModelConfig model_config_from_json(const nlohmann::json & j, ModelConfig base = {});
/// Name of the first differing field, or empty if equal.
std::string first_difference(const ModelConfig & a, const ModelConfig & b);

}  // namespace lanepred::model

#endif  // LANEPRED__MODEL__MODEL_CONFIG_HPP_
