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

#ifndef LANEPRED__TRAIN__TRAINER_HPP_
#define LANEPRED__TRAIN__TRAINER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lanepred/model/lapred_model.hpp"
#include "lanepred/scenario/instance.hpp"
#include "lanepred/train/losses.hpp"

namespace lanepred::train
{

struct TrainConfig
{
  int batch_size{32};
  double lr{3e-4};
  int plateau_patience{3};
  double lr_decay{0.5};
  int max_epochs{100};
  std::uint64_t seed{0};
  double val_fraction{0.1};  // used only when no validation set is given

  void validate() const;
};

struct EpochRecord
{
  int epoch{0};  // 1-based
  double lr{0.0};  // rate used during the epoch
  LossComponents train;
  bool has_val{false};
  LossComponents val;
  double val_ade{0.0};  // best-of-K over the model's K hypotheses
  double val_fde{0.0};
  double seconds{0.0};
};

struct TrainReport
{
  std::vector<EpochRecord> epochs;
  int best_epoch{0};
  double best_loss{std::numeric_limits<double>::infinity()};
  int lr_decays{0};
};

/// Non-finite loss during training.
class DivergenceError : public std::runtime_error
{
public:
  DivergenceError(int epoch, std::size_t batch)
  : std::runtime_error(
      "non-finite loss at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch)),
    epoch_(epoch), batch_(batch)
  {
  }
  int epoch() const { return epoch_; }
  std::size_t batch() const { return batch_; }

private:
  int epoch_;
  std::size_t batch_;
};

struct TrainHooks
{
  /// When set, "initial", "best" and "final" checkpoints are written here.
  std::filesystem::path checkpoint_dir;
  nlohmann::json checkpoint_metadata = nlohmann::json::object();
  std::function<void(const EpochRecord &)> on_epoch;
};

/// Loss components averaged over instances, without recording a graph.
LossComponents evaluate_loss(
  const model::LaPredModel & model, const std::vector<scenario::PredictionInstance> & data,
  const LossConfig & cfg, std::size_t batch_size);

/// Seeded shuffle split; the validation part holds round(fraction * size) instances.
std::pair<std::vector<scenario::PredictionInstance>, std::vector<scenario::PredictionInstance>>
split_train_val(
  const std::vector<scenario::PredictionInstance> & data, double fraction, std::uint64_t seed);

/**
 * @brief Mini-batch Adam training with plateau learning-rate decay.
 *
 * Each epoch visits the training set in a seeded random order. The scheduler
 * and the best checkpoint follow the validation total loss, or the training
 * total when the validation set is empty. Throws DivergenceError on a
 * non-finite batch loss.
 */
TrainReport train_loop(
  model::LaPredModel & model, const std::vector<scenario::PredictionInstance> & train_set,
  const std::vector<scenario::PredictionInstance> & val_set, const LossConfig & loss_cfg,
  const TrainConfig & cfg, const TrainHooks & hooks = {});

}  // namespace lanepred::train

#endif  // LANEPRED__TRAIN__TRAINER_HPP_
