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

#ifndef LANEPRED__EVAL__REPORTS_HPP_
#define LANEPRED__EVAL__REPORTS_HPP_

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "lanepred/eval/metrics.hpp"
#include "lanepred/model/lapred_model.hpp"
#include "lanepred/scenario/instance.hpp"
#include "lanepred/train/trainer.hpp"

namespace lanepred::eval
{

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Decimal form with 15 to 17 significant digits, whichever first reads back exactly.
std::string format_double(double v);

nlohmann::json to_json(const MetricReport & r);
void write_metric_csv(const std::filesystem::path & path, const std::vector<MetricReport> & reports);
void write_metric_json(
  const std::filesystem::path & path, const std::vector<MetricReport> & reports);

/// Columns: epoch, lr, loss_total, loss_pos, loss_laneoff, loss_cls, val_total, val_ade, val_fde.
/// Wall-clock time is left out so identical runs give identical files.
void write_train_csv(const std::filesystem::path & path, const train::TrainReport & r);
nlohmann::json to_json(const train::TrainReport & r);
void write_train_json(const std::filesystem::path & path, const train::TrainReport & r);

/// One line per instance: id, K x h x 2 trajectories (target frame), lane weights.
nlohmann::json prediction_to_json(
  const scenario::PredictionInstance & inst, const model::PredictionOutput & out);
void write_predictions(
  const std::filesystem::path & path, const std::vector<scenario::PredictionInstance> & data,
  const std::vector<model::PredictionOutput> & outputs);

}  // namespace lanepred::eval

#endif  // LANEPRED__EVAL__REPORTS_HPP_
