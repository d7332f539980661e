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

#include "lanepred/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>
#include <vector>

#include "lanepred/cli/run_config.hpp"
#include "lanepred/eval/metrics.hpp"
#include "lanepred/eval/reports.hpp"
#include "lanepred/scenario/instance.hpp"
#include "lanepred/scenario/scenario_io.hpp"
#include "lanepred/scenario/synthetic.hpp"
#include "lanepred/train/checkpoint.hpp"
#include "lanepred/train/trainer.hpp"

namespace lanepred::cli
{

namespace
{

class UsageError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

int guarded(const char * name, const std::function<int()> & body)
{
  try {
    return body();
  } catch (const ConfigError & e) {
    std::cerr << name << ": config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const UsageError & e) {
    std::cerr << name << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const train::DivergenceError & e) {
    std::cerr << name << ": training diverged: " << e.what() << '\n';
    return kDiverged;
  } catch (const std::exception & e) {
    std::cerr << name << ": " << e.what() << '\n';
    return kDataError;
  }
}

RunConfig load_config(const CommonOptions & o)
{
  return load_run_config(o.config);
}

void echo_config(const CommonOptions & o, const RunConfig & c)
{
  if (!o.quiet) {
    std::cout << "config " << to_json(c).dump() << '\n';
  }
}

void require_path(const std::filesystem::path & p, const char * flag)
{
  if (p.empty()) {
    throw UsageError(std::string(flag) + " is required");
  }
}

std::string file_id(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return path.filename().string() + "@" + eval::fnv1a_hex(ss.str());
}

std::vector<scenario::PredictionInstance> load_data(
  const std::filesystem::path & path, const model::ModelConfig & cfg)
{
  auto data = scenario::load_instances(path);
  if (data.empty()) {
    throw std::runtime_error(path.string() + ": no instances");
  }
  for (const auto & inst : data) {
    model::check_instance(inst, cfg);
  }
  return data;
}

}  // namespace

int cmd_gen(const GenOptions & o)
{
  return guarded("gen", [&] {
      require_path(o.out, "--out");
      RunConfig c = load_config(o.common);
      if (o.common.seed) {
        c.synthetic.seed = *o.common.seed;
      }
      if (o.n_scenarios) {
        c.synthetic.n_scenarios = *o.n_scenarios;
      }
      if (o.topology) {
        try {
          c.synthetic.lane_topology = scenario::topology_from_string(*o.topology);
        } catch (const std::invalid_argument & e) {
          throw ConfigError(std::string("--topology: ") + e.what());
        }
      }
      c.finalize();
      echo_config(o.common, c);
      const auto scenarios = scenario::generate_synthetic(c.synthetic);
      scenario::write_scenarios(o.out, scenarios);
      if (!o.common.quiet) {
        std::cout << "wrote " << scenarios.size() << " scenarios to " << o.out.string() << '\n';
      }
      return kOk;
    });
}

int cmd_preprocess(const PreprocessOptions & o)
{
  return guarded("preprocess", [&] {
      require_path(o.in, "--in");
      require_path(o.out, "--out");
      RunConfig c = load_config(o.common);
      echo_config(o.common, c);
      const auto scenarios = scenario::load_scenarios(o.in);
      const std::size_t n = scenarios.size();
      std::vector<std::optional<scenario::PredictionInstance>> built(n);
      std::vector<std::string> reasons(n);
      std::vector<std::exception_ptr> failures(n);
      // Workers take interleaved slots; results are collected in input order.
      auto work = [&](std::size_t first, std::size_t stride) {
          for (std::size_t i = first; i < n; i += stride) {
            try {
              built[i] = scenario::build_instance(scenarios[i], c.candidates, c.instance);
            } catch (const scenario::InstanceRejected & e) {
              reasons[i] = e.what();
            } catch (...) {
              failures[i] = std::current_exception();
            }
          }
        };
      const std::size_t workers = std::clamp<std::size_t>(
        std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n, 1));
      std::vector<std::thread> pool;
      for (std::size_t t = 1; t < workers; ++t) {
        pool.emplace_back(work, t, workers);
      }
      work(0, workers);
      for (auto & t : pool) {
        t.join();
      }

      std::vector<scenario::PredictionInstance> accepted;
      std::size_t rejected = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (failures[i]) {
          std::rethrow_exception(failures[i]);
        }
        if (built[i]) {
          accepted.push_back(std::move(*built[i]));
        } else {
          ++rejected;
          std::cerr << "rejected " << scenarios[i].scenario_id << ": " << reasons[i] << '\n';
        }
      }
      scenario::write_instances(o.out, accepted);
      if (!o.common.quiet) {
        std::cout << "scenarios " << scenarios.size() << " accepted " << accepted.size()
                  << " rejected " << rejected << '\n';
      }
      return kOk;
    });
}

int cmd_train(const TrainOptions & o)
{
  return guarded("train", [&] {
      require_path(o.data, "--data");
      require_path(o.out_dir, "--out-dir");
      RunConfig c = load_config(o.common);
      if (o.common.seed) {
        c.train.seed = *o.common.seed;
      }
      if (o.max_epochs) {
        c.train.max_epochs = *o.max_epochs;
      }
      c.finalize();
      echo_config(o.common, c);

      auto data = load_data(o.data, c.model);
      std::vector<scenario::PredictionInstance> train_set;
      std::vector<scenario::PredictionInstance> val_set;
      if (o.val.empty()) {
        std::tie(train_set, val_set) =
          train::split_train_val(data, c.train.val_fraction, c.train.seed);
      } else {
        train_set = std::move(data);
        val_set = load_data(o.val, c.model);
      }
      if (train_set.empty()) {
        throw std::runtime_error("training split is empty");
      }

      std::filesystem::create_directories(o.out_dir);
      {
        std::ofstream cfg_out = scenario::open_output(o.out_dir / "run_config.json");
        cfg_out << to_json(c).dump(2) << '\n';
      }
      model::LaPredModel model(c.model, c.train.seed);
      train::TrainHooks hooks;
      hooks.checkpoint_dir = o.out_dir;
      hooks.checkpoint_metadata = {{"run_config", to_json(c)}};
      hooks.on_epoch = [&](const train::EpochRecord & e) {
        if (o.common.quiet) {
          return;
        }
        char line[256];
        std::snprintf(line, sizeof(line),
          "epoch %3d lr %.3g train %.5f (pos %.4f off %.4f cls %.4f)", e.epoch, e.lr,
          e.train.total, e.train.pos, e.train.lane_off, e.train.cls);
        std::cout << line;
        if (e.has_val) {
          std::snprintf(line, sizeof(line), " val %.5f ade %.4f fde %.4f", e.val.total,
            e.val_ade, e.val_fde);
          std::cout << line;
        }
        std::snprintf(line, sizeof(line), " [%.1fs]", e.seconds);
        std::cout << line << std::endl;
      };
      const auto report = train::train_loop(model, train_set, val_set, c.loss, c.train, hooks);
      eval::write_train_csv(o.out_dir / "train_report.csv", report);
      eval::write_train_json(o.out_dir / "train_report.json", report);
      if (!o.common.quiet) {
        std::cout << "trained " << report.epochs.size() << " epochs on " << train_set.size()
                  << " instances (val " << val_set.size() << "); best epoch "
                  << report.best_epoch << '\n';
      }
      return kOk;
    });
}

int cmd_eval(const EvalOptions & o)
{
  return guarded("eval", [&] {
      require_path(o.data, "--data");
      require_path(o.checkpoint, "--checkpoint");
      require_path(o.out_dir, "--out-dir");
      RunConfig c = load_config(o.common);
      auto loaded = train::load_checkpoint(o.checkpoint);
      const auto & model = loaded.model;
      const int K = model.config().num_modes;
      std::vector<int> ks;
      if (o.k.empty()) {
        ks = K > 1 ? std::vector<int>{1, K} : std::vector<int>{1};
      } else {
        try {
          ks = eval::parse_k_list(o.k);
        } catch (const std::invalid_argument & e) {
          throw UsageError(std::string("--k: ") + e.what());
        }
      }
      for (const int k : ks) {
        if (k > K) {
          throw UsageError(
            "--k " + std::to_string(k) + " exceeds the checkpoint's " + std::to_string(K) +
            " hypotheses");
        }
      }
      const auto data = load_data(o.data, model.config());
      const auto batch = static_cast<std::size_t>(c.train.batch_size);

      std::vector<eval::MetricReport> reports;
      reports.push_back(eval::evaluate_dataset(model, data, ks, batch));
      if (o.baseline) {
        reports.push_back(eval::evaluate_constant_velocity(data, ks));
      }
      const auto ckpt = train::checkpoint_prefix(o.checkpoint);
      auto ckpt_json = ckpt;
      ckpt_json += ".json";
      const std::string ckpt_id = file_id(ckpt_json);
      const std::string data_id = file_id(o.data);
      const std::string hash = eval::fnv1a_hex(model::to_json(model.config()).dump());
      for (auto & r : reports) {
        r.checkpoint_id = ckpt_id;
        r.dataset_id = data_id;
        r.config_hash = hash;
      }
      eval::write_metric_csv(o.out_dir / "metrics.csv", reports);
      eval::write_metric_json(o.out_dir / "metrics.json", reports);
      if (!o.common.quiet) {
        for (const auto & r : reports) {
          for (const auto & row : r.rows) {
            char line[160];
            std::snprintf(line, sizeof(line), "%-18s k=%-3d ADE %.4f FDE %.4f (n=%zu)",
              r.method.c_str(), row.k, row.ade, row.fde, r.count);
            std::cout << line << '\n';
          }
        }
      }
      return kOk;
    });
}

int cmd_predict(const PredictOptions & o)
{
  return guarded("predict", [&] {
      require_path(o.data, "--data");
      require_path(o.checkpoint, "--checkpoint");
      require_path(o.out, "--out");
      RunConfig c = load_config(o.common);
      auto loaded = train::load_checkpoint(o.checkpoint);
      const auto data = load_data(o.data, loaded.model.config());
      const auto outputs = eval::predict_dataset(
        loaded.model, data, static_cast<std::size_t>(c.train.batch_size));
      eval::write_predictions(o.out, data, outputs);
      if (!o.common.quiet) {
        std::cout << "wrote " << outputs.size() << " predictions to " << o.out.string() << '\n';
      }
      return kOk;
    });
}

}  // namespace lanepred::cli
