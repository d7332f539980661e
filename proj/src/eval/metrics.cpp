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

#include "lanepred/eval/metrics.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lanepred/nn/tensor.hpp"

namespace lanepred::eval
{

AdeFde ade_fde(const Hypotheses & preds, std::span<const geom::Point2> gt, std::size_t k_eval)
{
  if (k_eval < 1) {
    throw std::invalid_argument("k_eval must be >= 1");
  }
  if (k_eval > preds.size()) {
    throw std::invalid_argument(
      "k_eval " + std::to_string(k_eval) + " exceeds " + std::to_string(preds.size()) +
      " hypotheses");
  }
  if (gt.empty()) {
    throw std::invalid_argument("empty ground truth");
  }
  AdeFde r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < k_eval; ++k) {
    if (preds[k].size() != gt.size()) {
      throw std::invalid_argument(
        "hypothesis " + std::to_string(k) + " has " + std::to_string(preds[k].size()) +
        " points, ground truth has " + std::to_string(gt.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      sum += geom::distance(preds[k][i], gt[i]);
    }
    r.ade = std::min(r.ade, sum / static_cast<double>(gt.size()));
    r.fde = std::min(r.fde, geom::distance(preds[k].back(), gt.back()));
  }
  return r;
}

const MetricRow & MetricReport::at_k(int k) const
{
  for (const auto & r : rows) {
    if (r.k == k) {
      return r;
    }
  }
  throw std::out_of_range("no metrics for k=" + std::to_string(k));
}

MetricReport evaluate_predictions(
  const std::vector<Hypotheses> & preds, const std::vector<scenario::PredictionInstance> & data,
  const std::vector<int> & k_list)
{
  if (data.empty()) {
    throw std::invalid_argument("cannot evaluate an empty dataset");
  }
  if (preds.size() != data.size()) {
    throw std::invalid_argument("prediction count differs from instance count");
  }
  MetricReport report;
  report.count = data.size();
  for (const int k : k_list) {
    if (k < 1) {
      throw std::invalid_argument("k must be >= 1");
    }
    MetricRow row{k, 0.0, 0.0};
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto m = ade_fde(preds[i], data[i].future, static_cast<std::size_t>(k));
      row.ade += m.ade;
      row.fde += m.fde;
    }
    row.ade /= static_cast<double>(data.size());
    row.fde /= static_cast<double>(data.size());
    report.rows.push_back(row);
  }
  return report;
}

std::vector<model::PredictionOutput> predict_dataset(
  const model::LaPredModel & model, const std::vector<scenario::PredictionInstance> & data,
  std::size_t batch_size)
{
  nn::NoGradGuard no_grad;
  std::vector<model::PredictionOutput> out;
  out.reserve(data.size());
  batch_size = std::max<std::size_t>(batch_size, 1);
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    std::vector<const scenario::PredictionInstance *> ptrs;
    for (std::size_t i = start; i < std::min(data.size(), start + batch_size); ++i) {
      ptrs.push_back(&data[i]);
    }
    auto part = model::unpack(model.forward(model::make_batch(ptrs, model.config())));
    for (auto & p : part) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

MetricReport evaluate_dataset(
  const model::LaPredModel & model, const std::vector<scenario::PredictionInstance> & data,
  const std::vector<int> & k_list, std::size_t batch_size)
{
  for (const int k : k_list) {
    if (k > model.config().num_modes) {
      throw std::invalid_argument(
        "k=" + std::to_string(k) + " exceeds the model's " +
        std::to_string(model.config().num_modes) + " hypotheses");
    }
  }
  const auto outputs = predict_dataset(model, data, batch_size);
  std::vector<Hypotheses> preds;
  preds.reserve(outputs.size());
  for (const auto & o : outputs) {
    preds.push_back(o.trajectories);
  }
  auto report = evaluate_predictions(preds, data, k_list);
  report.method = "lanepred";
  return report;
}

std::vector<geom::Point2> constant_velocity_baseline(
  std::span<const geom::Point2> past, std::size_t h)
{
  if (past.size() < 2) {
    throw std::invalid_argument("constant-velocity baseline needs at least two past points");
  }
  const geom::Point2 last = past.back();
  const geom::Point2 v = last - past[past.size() - 2];
  std::vector<geom::Point2> out(h);
  for (std::size_t i = 0; i < h; ++i) {
    out[i] = last + static_cast<double>(i + 1) * v;
  }
  return out;
}

MetricReport evaluate_constant_velocity(
  const std::vector<scenario::PredictionInstance> & data, const std::vector<int> & k_list)
{
  // A single hypothesis serves every k.
  int kmax = 1;
  for (const int k : k_list) {
    kmax = std::max(kmax, k);
  }
  std::vector<Hypotheses> preds;
  preds.reserve(data.size());
  for (const auto & inst : data) {
    preds.emplace_back(
      static_cast<std::size_t>(kmax), constant_velocity_baseline(inst.past, inst.future.size()));
  }
  auto report = evaluate_predictions(preds, data, k_list);
  report.method = "constant_velocity";
  return report;
}

std::vector<int> parse_k_list(const std::string & text)
{
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(item, &used);
    } catch (const std::exception &) {
      throw std::invalid_argument("k list: '" + item + "' is not an integer");
    }
    if (used != item.size() || k < 1) {
      throw std::invalid_argument("k list: '" + item + "' is not a positive integer");
    }
    out.push_back(k);
  }
  if (out.empty()) {
    throw std::invalid_argument("k list is empty");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace lanepred::eval
