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

#ifndef LANEPRED__TRAIN__CHECKPOINT_HPP_
#define LANEPRED__TRAIN__CHECKPOINT_HPP_

#include <filesystem>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "lanepred/model/lapred_model.hpp"

namespace lanepred::train
{

inline constexpr int kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief A checkpoint is a pair of files sharing a prefix.
 *
 * `<prefix>.json` holds the format version, the model config, the parameter
 * manifest and free-form metadata; `<prefix>.bin` holds the parameter values.
 * Either file name (or the bare prefix) identifies the checkpoint.
 */
std::filesystem::path checkpoint_prefix(const std::filesystem::path & path);

void save_checkpoint(
  const std::filesystem::path & path, const model::LaPredModel & model,
  const nlohmann::json & metadata = nlohmann::json::object());

struct LoadedCheckpoint
{
  model::LaPredModel model;
  nlohmann::json metadata;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path & path);

/// Loads and checks the stored config against `expected`; a mismatch names the field.
LoadedCheckpoint load_checkpoint(
  const std::filesystem::path & path, const model::ModelConfig & expected);

}  // namespace lanepred::train

#endif  // LANEPRED__TRAIN__CHECKPOINT_HPP_
