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

#ifndef LANEPRED__EVAL__METRICS_HPP_
#define LANEPRED__EVAL__METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lanepred/geom_map/polyline.hpp"
#include "lanepred/model/lapred_model.hpp"
#include "lanepred/scenario/instance.hpp"

namespace lanepred::eval
{

using Hypotheses = std::vector<std::vector<geom::Point2>>;  // K x h

struct AdeFde
{
  double ade{0.0};
  double fde{0.0};
};

/// Best-of-k displacement errors over the first k_eval hypotheses; the two minima
/// are taken independently.
AdeFde ade_fde(const Hypotheses & preds, std::span<const geom::Point2> gt, std::size_t k_eval);

struct MetricRow
{
  int k{1};
  double ade{0.0};
  double fde{0.0};
};

struct MetricReport
{
  std::string method;
  std::string checkpoint_id;
  std::string dataset_id;
  std::string config_hash;
  std::size_t count{0};
  std::vector<MetricRow> rows;

  const MetricRow & at_k(int k) const;
};

/// Mean per-instance metrics for every k. Throws if predictions and instances disagree.
MetricReport evaluate_predictions(
  const std::vector<Hypotheses> & preds, const std::vector<scenario::PredictionInstance> & data,
  const std::vector<int> & k_list);

/// Detached model outputs for a dataset, in input order.
std::vector<model::PredictionOutput> predict_dataset(
  const model::LaPredModel & model, const std::vector<scenario::PredictionInstance> & data,
  std::size_t batch_size = 32);

MetricReport evaluate_dataset(
  const model::LaPredModel & model, const std::vector<scenario::PredictionInstance> & data,
  const std::vector<int> & k_list, std::size_t batch_size = 32);

/// Repeats the last observed displacement h times. Needs at least two past points.
std::vector<geom::Point2> constant_velocity_baseline(
  std::span<const geom::Point2> past, std::size_t h);

MetricReport evaluate_constant_velocity(
  const std::vector<scenario::PredictionInstance> & data, const std::vector<int> & k_list);

/// Parses "1,5,10" into ascending unique positive values.
std::vector<int> parse_k_list(const std::string & text);

}  // namespace lanepred::eval

#endif  // LANEPRED__EVAL__METRICS_HPP_
