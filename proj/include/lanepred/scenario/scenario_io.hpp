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

#ifndef LANEPRED__SCENARIO__SCENARIO_IO_HPP_
#define LANEPRED__SCENARIO__SCENARIO_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lanepred/scenario/scenario.hpp"

namespace lanepred::scenario
{

/// A malformed JSONL line. `line` is 1-based.
class FormatError : public std::runtime_error
{
public:
  FormatError(std::size_t line, const std::string & field, const std::string & what)
  : std::runtime_error("line " + std::to_string(line) + ": " + field + ": " + what),
    line_(line),
    field_(field)
  {
  }
  std::size_t line() const { return line_; }
  const std::string & field() const { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

nlohmann::json scenario_to_json(const Scenario & s);
/// Throws ScenarioError naming the offending field.
Scenario scenario_from_json(const nlohmann::json & j);

/// Streams scenarios one JSONL line at a time. Blank lines are skipped.
class ScenarioReader
{
public:
  explicit ScenarioReader(std::istream & in) : in_(in) {}

  /// Next scenario, or nothing at end of input. Throws FormatError.
  std::optional<Scenario> next();
  std::size_t line() const { return line_; }

private:
  std::istream & in_;
  std::size_t line_{0};
};

std::vector<Scenario> load_scenarios(const std::filesystem::path & path);

/// Writes one scenario as a single JSONL line (newline terminated).
void write_scenario(std::ostream & out, const Scenario & s);
void write_scenarios(const std::filesystem::path & path, const std::vector<Scenario> & scenarios);

/// Opens `path` for reading, throwing std::runtime_error when that fails.
std::ifstream open_input(const std::filesystem::path & path);
std::ofstream open_output(const std::filesystem::path & path);

}  // namespace lanepred::scenario

#endif  // LANEPRED__SCENARIO__SCENARIO_IO_HPP_
