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

#ifndef LANEPRED__NN__SERIALIZE_HPP_
#define LANEPRED__NN__SERIALIZE_HPP_

#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "lanepred/nn/layers.hpp"

namespace lanepred::nn
{

/**
 * @brief Writes parameter values as little-endian float64 and returns the manifest.
 *
 * The manifest is a JSON array of {"name", "shape", "offset"} with byte offsets
 * into the blob, in parameter order.
 */
nlohmann::json write_parameters(const NamedParams & params, std::ostream & blob);

/**
 * @brief Fills existing parameters from a blob described by `manifest`.
 *
 * Names, order and shapes must match exactly; a mismatch throws
 * std::runtime_error naming the parameter.
 */
void read_parameters(const NamedParams & params, const nlohmann::json & manifest, std::istream & blob);

}  // namespace lanepred::nn

#endif  // LANEPRED__NN__SERIALIZE_HPP_
