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

#ifndef LANEPRED__CLI__COMMANDS_HPP_
#define LANEPRED__CLI__COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace lanepred::cli
{

enum ExitCode : int
{
  kOk = 0,
  kUsageError = 1,
  kDataError = 2,
  kDiverged = 3,
};

struct CommonOptions
{
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  bool quiet{false};
};

struct GenOptions
{
  CommonOptions common;
  std::filesystem::path out;
  std::optional<int> n_scenarios;
  std::optional<std::string> topology;
};

struct PreprocessOptions
{
  CommonOptions common;
  std::filesystem::path in;
  std::filesystem::path out;
};

struct TrainOptions
{
  CommonOptions common;
  std::filesystem::path data;
  std::filesystem::path val;  // empty: split off train.val_fraction of the data
  std::filesystem::path out_dir;
  std::optional<int> max_epochs;
};

struct EvalOptions
{
  CommonOptions common;
  std::filesystem::path data;
  std::filesystem::path checkpoint;
  std::filesystem::path out_dir;
  std::string k;  // empty: 1 and the model's K
  bool baseline{false};
};

struct PredictOptions
{
  CommonOptions common;
  std::filesystem::path data;
  std::filesystem::path checkpoint;
  std::filesystem::path out;
};

// Each command validates its configuration before writing anything and maps
// failures to ExitCode values, reporting them on stderr.
int cmd_gen(const GenOptions & o);
int cmd_preprocess(const PreprocessOptions & o);
int cmd_train(const TrainOptions & o);
int cmd_eval(const EvalOptions & o);
int cmd_predict(const PredictOptions & o);

}  // namespace lanepred::cli

#endif  // LANEPRED__CLI__COMMANDS_HPP_
