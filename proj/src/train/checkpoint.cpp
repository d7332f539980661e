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

#include "lanepred/train/checkpoint.hpp"

#include <fstream>

#include "lanepred/nn/serialize.hpp"
#include "lanepred/scenario/scenario_io.hpp"

namespace lanepred::train
{

std::filesystem::path checkpoint_prefix(const std::filesystem::path & path)
{
  auto p = path;
  if (p.extension() == ".json" || p.extension() == ".bin") {
    p.replace_extension();
  }
  return p;
}

namespace
{

std::filesystem::path with_suffix(const std::filesystem::path & prefix, const char * suffix)
{
  auto p = prefix;
  p += suffix;
  return p;
}

}  // namespace

void save_checkpoint(
  const std::filesystem::path & path, const model::LaPredModel & model,
  const nlohmann::json & metadata)
{
  const auto prefix = checkpoint_prefix(path);
  const auto bin_path = with_suffix(prefix, ".bin");
  nlohmann::json manifest;
  {
    std::ofstream blob = scenario::open_output(bin_path);
    blob.exceptions(std::ios::badbit | std::ios::failbit);
    manifest = nn::write_parameters(model.parameters(), blob);
  }
  const nlohmann::json doc = {
    {"format", "lanepred-checkpoint"},
    {"version", kCheckpointVersion},
    {"model_config", model::to_json(model.config())},
    {"parameters", manifest},
    {"blob", bin_path.filename().string()},
    {"metadata", metadata}};
  std::ofstream out = scenario::open_output(with_suffix(prefix, ".json"));
  out << doc.dump(2) << '\n';
  if (!out) {
    throw CheckpointError("failed to write checkpoint " + prefix.string());
  }
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path & path)
{
  const auto prefix = checkpoint_prefix(path);
  const auto json_path = with_suffix(prefix, ".json");
  std::ifstream in(json_path);
  if (!in) {
    throw CheckpointError("cannot open checkpoint " + json_path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception & e) {
    throw CheckpointError(json_path.string() + ": " + e.what());
  }
  if (doc.value("format", "") != "lanepred-checkpoint") {
    throw CheckpointError(json_path.string() + ": not a lanepred checkpoint");
  }
  if (doc.value("version", -1) != kCheckpointVersion) {
    throw CheckpointError(
      json_path.string() + ": unsupported checkpoint version " + doc.value("version", nlohmann::json()).dump());
  }
  model::ModelConfig cfg;
  try {
    cfg = model::model_config_from_json(doc.at("model_config"));
    cfg.validate();
  } catch (const std::exception & e) {
    throw CheckpointError(json_path.string() + ": " + e.what());
  }
  model::LaPredModel m(cfg, 0);
  const auto bin_path = json_path.parent_path() / doc.at("blob").get<std::string>();
  std::ifstream blob(bin_path, std::ios::binary);
  if (!blob) {
    throw CheckpointError("cannot open checkpoint blob " + bin_path.string());
  }
  try {
    nn::read_parameters(m.parameters(), doc.at("parameters"), blob);
  } catch (const std::exception & e) {
    throw CheckpointError(json_path.string() + ": " + e.what());
  }
  return {std::move(m), doc.value("metadata", nlohmann::json::object())};
}

LoadedCheckpoint load_checkpoint(
  const std::filesystem::path & path, const model::ModelConfig & expected)
{
  auto loaded = load_checkpoint(path);
  const auto field = model::first_difference(loaded.model.config(), expected);
  if (!field.empty()) {
    throw CheckpointError(
      "checkpoint " + checkpoint_prefix(path).string() + ": model." + field +
      " differs from the requested config");
  }
  return loaded;
}

}  // namespace lanepred::train
