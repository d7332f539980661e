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

#ifndef LANEPRED__CLI__RUN_CONFIG_HPP_
#define LANEPRED__CLI__RUN_CONFIG_HPP_

#include <filesystem>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "lanepred/geom_map/lane_candidates.hpp"
#include "lanepred/model/model_config.hpp"
#include "lanepred/scenario/instance.hpp"
#include "lanepred/scenario/synthetic.hpp"
#include "lanepred/train/losses.hpp"
#include "lanepred/train/trainer.hpp"

namespace lanepred::cli
{

class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief Every setting of a pipeline run.
 *
 * Serialized as a JSON object with sections "candidates", "instance", "model",
 * "loss", "train" and "synthetic"; every key is optional. The model's lane
 * count, lane length, past and future lengths follow from the candidate and
 * instance sections, and the synthetic track lengths follow the instance
 * section; stating a conflicting value is an error.
 */
struct RunConfig
{
  geom::CandidateConfig candidates;
  scenario::InstanceConfig instance;
  model::ModelConfig model;
  train::LossConfig loss;
  train::TrainConfig train;
  scenario::SyntheticConfig synthetic;

  /// Re-derives the linked fields and validates every section. Throws ConfigError.
  void finalize();
};

RunConfig run_config_from_json(const nlohmann::json & j);
nlohmann::json to_json(const RunConfig & cfg);
/// Reads a config file; an empty path yields the defaults.
RunConfig load_run_config(const std::filesystem::path & path);

}  // namespace lanepred::cli

#endif  // LANEPRED__CLI__RUN_CONFIG_HPP_
