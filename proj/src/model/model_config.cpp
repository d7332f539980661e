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

#include "lanepred/model/model_config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanepred::model
{

std::string to_string(SelectionMode m) { return m == SelectionMode::kSoft ? "soft" : "hard"; }

std::string to_string(AgentMode m)
{
  switch (m) {
    case AgentMode::kSingleLane:
      return "SL";
    case AgentMode::kMultiLane:
      return "ML";
    case AgentMode::kMulti:
      return "M";
  }
  return "SL";
}

SelectionMode selection_from_string(const std::string & s)
{
  if (s == "soft") {
    return SelectionMode::kSoft;
  }
  if (s == "hard") {
    return SelectionMode::kHard;
  }
  throw std::invalid_argument("selection: expected soft or hard, got '" + s + "'");
}

AgentMode agent_mode_from_string(const std::string & s)
{
  if (s == "SL") {
    return AgentMode::kSingleLane;
  }
  if (s == "ML") {
    return AgentMode::kMultiLane;
  }
  if (s == "M") {
    return AgentMode::kMulti;
  }
  throw std::invalid_argument("agent_mode: expected SL, ML or M, got '" + s + "'");
}

ModelDims ModelConfig::dims() const
{
  auto sc = [this](double base) {
    return static_cast<std::size_t>(std::max(1L, std::lround(base * width_scale)));
  };
  auto sv = [&](std::initializer_list<double> base) {
    std::vector<std::size_t> out;
    for (const double b : base) {
      out.push_back(sc(b));
    }
    return out;
  };
  ModelDims d;
  d.traj_conv = sc(64);
  d.traj_lstm = sc(512);
  d.lane_conv = sc(64);
  d.lane_conv_wide = sc(96);
  d.lane_lstm = sc(2048);
  d.tfe_fc = sv({2048, 2048, 1024, 1024});
  d.la_fc = sv({512, 512, 256, 256, 64, 64});
  d.mtp_head = sv({512, 512, 256});
  d.mtp_shared = sv({256});
  return d;
}

void ModelConfig::validate() const
{
  auto positive = [](int v, const char * name) {
    if (v < 1) {
      throw std::invalid_argument(std::string(name) + " must be >= 1");
    }
  };
  positive(num_lanes, "num_lanes");
  positive(num_modes, "num_modes");
  positive(future_len, "future_len");
  positive(lane_points, "lane_points");
  positive(ml_agent_cap, "ml_agent_cap");
  // Two kernel-2 convolutions without padding consume two steps.
  if (past_len < 3) {
    throw std::invalid_argument("past_len must be >= 3");
  }
  if (!(width_scale > 0.0 && width_scale <= 1.0)) {
    throw std::invalid_argument("width_scale must lie in (0, 1]");
  }
  if (!(input_scale > 0.0) || !std::isfinite(input_scale)) {
    throw std::invalid_argument("input_scale must be positive");
  }
}

nlohmann::json to_json(const ModelConfig & c)
{
  return {
    {"num_lanes", c.num_lanes},
    {"num_modes", c.num_modes},
    {"past_len", c.past_len},
    {"future_len", c.future_len},
    {"lane_points", c.lane_points},
    {"width_scale", c.width_scale},
    {"selection", to_string(c.selection)},
    {"agent_mode", to_string(c.agent_mode)},
    {"mask_invalid_lanes", c.mask_invalid_lanes},
    {"use_lanes", c.use_lanes},
    {"use_agents", c.use_agents},
    {"ml_agent_cap", c.ml_agent_cap},
    {"input_scale", c.input_scale}};
}

ModelConfig model_config_from_json(const nlohmann::json & j, ModelConfig c)
{
  if (!j.is_object()) {
    throw std::invalid_argument("model: expected an object");
  }
  for (const auto & [key, v] : j.items()) {
    try {
      if (key == "num_lanes") {
        c.num_lanes = v.get<int>();
      } else if (key == "num_modes") {
        c.num_modes = v.get<int>();
      } else if (key == "past_len") {
        c.past_len = v.get<int>();
      } else if (key == "future_len") {
        c.future_len = v.get<int>();
      } else if (key == "lane_points") {
        c.lane_points = v.get<int>();
      } else if (key == "width_scale") {
        c.width_scale = v.get<double>();
      } else if (key == "selection") {
        c.selection = selection_from_string(v.get<std::string>());
      } else if (key == "agent_mode") {
        c.agent_mode = agent_mode_from_string(v.get<std::string>());
      } else if (key == "mask_invalid_lanes") {
        c.mask_invalid_lanes = v.get<bool>();
      } else if (key == "use_lanes") {
        c.use_lanes = v.get<bool>();
      } else if (key == "use_agents") {
        c.use_agents = v.get<bool>();
      } else if (key == "ml_agent_cap") {
        c.ml_agent_cap = v.get<int>();
      } else if (key == "input_scale") {
        c.input_scale = v.get<double>();
      } else {
        throw std::invalid_argument("model." + key + ": unknown key");
      }
    } catch (const nlohmann::json::exception & e) {
      throw std::invalid_argument("model." + key + ": " + e.what());
    }
  }
  return c;
}

std::string first_difference(const ModelConfig & a, const ModelConfig & b)
{
  const auto ja = to_json(a);
  const auto jb = to_json(b);
  for (const auto & [key, v] : ja.items()) {
    if (jb.at(key) != v) {
      return key;
    }
  }
  return {};
}

}  // namespace lanepred::model
