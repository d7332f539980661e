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

#include "lanepred/eval/reports.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "lanepred/scenario/scenario_io.hpp"

namespace lanepred::eval
{

std::string fnv1a_hex(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

std::string format_double(double v)
{
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      break;
    }
  }
  return buf;
}

nlohmann::json to_json(const MetricReport & r)
{
  nlohmann::json rows = nlohmann::json::array();
  for (const auto & row : r.rows) {
    rows.push_back({{"k", row.k}, {"ade", row.ade}, {"fde", row.fde}});
  }
  return {
    {"method", r.method},
    {"checkpoint_id", r.checkpoint_id},
    {"dataset_id", r.dataset_id},
    {"config_hash", r.config_hash},
    {"count", r.count},
    {"metrics", rows}};
}

void write_metric_csv(const std::filesystem::path & path, const std::vector<MetricReport> & reports)
{
  std::ofstream out = scenario::open_output(path);
  out << "method,k,ade,fde,count\n";
  for (const auto & r : reports) {
    for (const auto & row : r.rows) {
      out << r.method << ',' << row.k << ',' << format_double(row.ade) << ','
          << format_double(row.fde) << ',' << r.count << '\n';
    }
  }
}

void write_metric_json(
  const std::filesystem::path & path, const std::vector<MetricReport> & reports)
{
  nlohmann::json doc = nlohmann::json::array();
  for (const auto & r : reports) {
    doc.push_back(to_json(r));
  }
  std::ofstream out = scenario::open_output(path);
  out << doc.dump(2) << '\n';
}

void write_train_csv(const std::filesystem::path & path, const train::TrainReport & r)
{
  std::ofstream out = scenario::open_output(path);
  out << "epoch,lr,loss_total,loss_pos,loss_laneoff,loss_cls,val_total,val_ade,val_fde\n";
  for (const auto & e : r.epochs) {
    out << e.epoch << ',' << format_double(e.lr) << ',' << format_double(e.train.total) << ','
        << format_double(e.train.pos) << ',' << format_double(e.train.lane_off) << ','
        << format_double(e.train.cls) << ',';
    if (e.has_val) {
      out << format_double(e.val.total) << ',' << format_double(e.val_ade) << ','
          << format_double(e.val_fde);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

namespace
{

nlohmann::json components_json(const train::LossComponents & c)
{
  return {
    {"total", c.total}, {"pos", c.pos}, {"laneoff", c.lane_off}, {"cls", c.cls},
    {"pred", c.pred}};
}

}  // namespace

nlohmann::json to_json(const train::TrainReport & r)
{
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto & e : r.epochs) {
    nlohmann::json j = {{"epoch", e.epoch}, {"lr", e.lr}, {"train", components_json(e.train)}};
    if (e.has_val) {
      j["val"] = components_json(e.val);
      j["val_ade"] = e.val_ade;
      j["val_fde"] = e.val_fde;
    }
    epochs.push_back(std::move(j));
  }
  nlohmann::json doc = {
    {"epochs", epochs}, {"best_epoch", r.best_epoch}, {"lr_decays", r.lr_decays}};
  doc["best_loss"] = r.epochs.empty() ? nlohmann::json() : nlohmann::json(r.best_loss);
  return doc;
}

void write_train_json(const std::filesystem::path & path, const train::TrainReport & r)
{
  std::ofstream out = scenario::open_output(path);
  out << to_json(r).dump(2) << '\n';
}

nlohmann::json prediction_to_json(
  const scenario::PredictionInstance & inst, const model::PredictionOutput & out)
{
  nlohmann::json traj = nlohmann::json::array();
  for (const auto & hyp : out.trajectories) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto & p : hyp) {
      pts.push_back({p.x, p.y});
    }
    traj.push_back(std::move(pts));
  }
  return {
    {"instance_id", inst.instance_id},
    {"trajectories", std::move(traj)},
    {"lane_weights", out.lane_weights}};
}

void write_predictions(
  const std::filesystem::path & path, const std::vector<scenario::PredictionInstance> & data,
  const std::vector<model::PredictionOutput> & outputs)
{
  if (data.size() != outputs.size()) {
    throw std::invalid_argument("prediction count differs from instance count");
  }
  std::ofstream out = scenario::open_output(path);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << prediction_to_json(data[i], outputs[i]).dump() << '\n';
  }
}

}  // namespace lanepred::eval
