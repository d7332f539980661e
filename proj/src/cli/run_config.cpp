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

#include "lanepred/cli/run_config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace lanepred::cli
{

using nlohmann::json;

namespace
{

using Setter = std::function<void(const json &)>;

void apply(const json & j, const std::string & section, const std::map<std::string, Setter> & setters)
{
  if (!j.is_object()) {
    throw ConfigError(section + ": expected an object");
  }
  for (const auto & [key, v] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError(section + "." + key + ": unknown key");
    }
    try {
      it->second(v);
    } catch (const json::exception & e) {
      throw ConfigError(section + "." + key + ": " + e.what());
    } catch (const std::invalid_argument & e) {
      throw ConfigError(section + "." + key + ": " + e.what());
    }
  }
}

template<typename T>
Setter set(T & field)
{
  return [&field](const json & v) { field = v.get<T>(); };
}

template<typename F>
void check_section(const std::string & section, F && fn)
{
  try {
    fn();
  } catch (const std::invalid_argument & e) {
    throw ConfigError(section + ": " + e.what());
  }
}

// Fields linked across sections: value the user wrote, if any.
struct Linked
{
  std::optional<int> num_lanes;
  std::optional<int> lane_points;
  std::optional<int> past_len;
  std::optional<int> future_len;
  std::optional<int> syn_past_len;
  std::optional<int> syn_future_len;
};

void link(RunConfig & c, const Linked & user)
{
  auto tie = [](int & field, int derived, const std::optional<int> & stated, const char * name) {
    if (stated && *stated != derived) {
      throw ConfigError(
        std::string(name) + ": " + std::to_string(*stated) + " conflicts with derived value " +
        std::to_string(derived));
    }
    field = derived;
  };
  tie(c.model.num_lanes, c.candidates.max_candidates, user.num_lanes, "model.num_lanes");
  tie(c.model.lane_points, c.candidates.num_points(), user.lane_points, "model.lane_points");
  tie(c.model.past_len, c.instance.past_len, user.past_len, "model.past_len");
  tie(c.model.future_len, c.instance.future_len, user.future_len, "model.future_len");
  tie(c.synthetic.past_len, c.instance.past_len, user.syn_past_len, "synthetic.past_len");
  tie(c.synthetic.future_len, c.instance.future_len, user.syn_future_len, "synthetic.future_len");
  c.loss.eta = c.candidates.eta;
}

}  // namespace

void RunConfig::finalize()
{
  check_section("candidates", [&] { candidates.validate(); });
  check_section("instance", [&] { instance.validate(); });
  link(*this, {});
  check_section("model", [&] { model.validate(); });
  check_section("loss", [&] { loss.validate(); });
  check_section("train", [&] { train.validate(); });
  check_section("synthetic", [&] { synthetic.validate(); });
}

RunConfig run_config_from_json(const json & j)
{
  RunConfig c;
  if (!j.is_object()) {
    throw ConfigError("config: expected a JSON object");
  }
  Linked user;
  for (const auto & [section, body] : j.items()) {
    if (section == "candidates") {
      auto & s = c.candidates;
      apply(body, section, {
          {"search_radius_m", set(s.search_radius_m)},
          {"forward_len_m", set(s.forward_len_m)},
          {"backward_len_m", set(s.backward_len_m)},
          {"spacing_m", set(s.spacing_m)},
          {"max_candidates", set(s.max_candidates)},
          {"agent_lateral_range_m", set(s.agent_lateral_range_m)},
          {"eta", [&s](const json & v) { s.eta = geom::eta_from_string(v.get<std::string>()); }},
        });
    } else if (section == "instance") {
      auto & s = c.instance;
      apply(body, section, {
          {"past_len", set(s.past_len)},
          {"future_len", set(s.future_len)},
          {"align_heading", set(s.align_heading)},
          {"context_agent_cap", set(s.context_agent_cap)},
        });
    } else if (section == "model") {
      try {
        c.model = model::model_config_from_json(body);
      } catch (const std::invalid_argument & e) {
        throw ConfigError(e.what());
      }
      for (const auto & [key, v] : body.items()) {
        if (key == "num_lanes") {
          user.num_lanes = v.get<int>();
        } else if (key == "lane_points") {
          user.lane_points = v.get<int>();
        } else if (key == "past_len") {
          user.past_len = v.get<int>();
        } else if (key == "future_len") {
          user.future_len = v.get<int>();
        }
      }
    } else if (section == "loss") {
      auto & s = c.loss;
      apply(body, section, {{"alpha", set(s.alpha)}, {"beta", set(s.beta)}});
    } else if (section == "train") {
      auto & s = c.train;
      apply(body, section, {
          {"batch_size", set(s.batch_size)},
          {"lr", set(s.lr)},
          {"plateau_patience", set(s.plateau_patience)},
          {"lr_decay", set(s.lr_decay)},
          {"max_epochs", set(s.max_epochs)},
          {"seed", set(s.seed)},
          {"val_fraction", set(s.val_fraction)},
        });
    } else if (section == "synthetic") {
      auto & s = c.synthetic;
      apply(body, section, {
          {"n_scenarios", set(s.n_scenarios)},
          {"lane_topology", [&s](const json & v) {
              s.lane_topology = scenario::topology_from_string(v.get<std::string>());
            }},
          {"noise_std_m", set(s.noise_std_m)},
          {"seed", set(s.seed)},
          {"past_len", [&](const json & v) { user.syn_past_len = v.get<int>(); }},
          {"future_len", [&](const json & v) { user.syn_future_len = v.get<int>(); }},
          {"sample_rate_hz", set(s.sample_rate_hz)},
          {"max_nearby_agents", set(s.max_nearby_agents)},
        });
    } else {
      throw ConfigError("unknown config section '" + section + "'");
    }
  }
  check_section("candidates", [&] { c.candidates.validate(); });
  check_section("instance", [&] { c.instance.validate(); });
  link(c, user);
  c.finalize();
  return c;
}

json to_json(const RunConfig & c)
{
  const auto & cd = c.candidates;
  const auto & in = c.instance;
  const auto & t = c.train;
  const auto & s = c.synthetic;
  return {
    {"candidates", {
        {"search_radius_m", cd.search_radius_m},
        {"forward_len_m", cd.forward_len_m},
        {"backward_len_m", cd.backward_len_m},
        {"spacing_m", cd.spacing_m},
        {"max_candidates", cd.max_candidates},
        {"agent_lateral_range_m", cd.agent_lateral_range_m},
        {"eta", geom::to_string(cd.eta)}}},
    {"instance", {
        {"past_len", in.past_len},
        {"future_len", in.future_len},
        {"align_heading", in.align_heading},
        {"context_agent_cap", in.context_agent_cap}}},
    {"model", model::to_json(c.model)},
    {"loss", {{"alpha", c.loss.alpha}, {"beta", c.loss.beta}}},
    {"train", {
        {"batch_size", t.batch_size},
        {"lr", t.lr},
        {"plateau_patience", t.plateau_patience},
        {"lr_decay", t.lr_decay},
        {"max_epochs", t.max_epochs},
        {"seed", t.seed},
        {"val_fraction", t.val_fraction}}},
    {"synthetic", {
        {"n_scenarios", s.n_scenarios},
        {"lane_topology", scenario::to_string(s.lane_topology)},
        {"noise_std_m", s.noise_std_m},
        {"seed", s.seed},
        {"past_len", s.past_len},
        {"future_len", s.future_len},
        {"sample_rate_hz", s.sample_rate_hz},
        {"max_nearby_agents", s.max_nearby_agents}}}};
}

RunConfig load_run_config(const std::filesystem::path & path)
{
  if (path.empty()) {
    RunConfig c;
    c.finalize();
    return c;
  }
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace lanepred::cli
