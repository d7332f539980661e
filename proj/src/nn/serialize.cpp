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

#include "lanepred/nn/serialize.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace lanepred::nn
{

namespace
{

std::uint64_t to_le(std::uint64_t v)
{
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) {
      r = (r << 8) | ((v >> (8 * i)) & 0xffu);
    }
    return r;
  }
  return v;
}

}  // namespace

nlohmann::json write_parameters(const NamedParams & params, std::ostream & blob)
{
  nlohmann::json manifest = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto & [name, p] : params) {
    manifest.push_back({{"name", name}, {"shape", p.shape()}, {"offset", offset}});
    std::vector<char> bytes(p.numel() * 8);
    const auto d = p.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
      const std::uint64_t le = to_le(std::bit_cast<std::uint64_t>(d[i]));
      std::memcpy(bytes.data() + 8 * i, &le, 8);
    }
    blob.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    offset += bytes.size();
  }
  if (!blob) {
    throw std::runtime_error("failed to write parameter blob");
  }
  return manifest;
}

void read_parameters(
  const NamedParams & params, const nlohmann::json & manifest, std::istream & blob)
{
  if (!manifest.is_array() || manifest.size() != params.size()) {
    throw std::runtime_error(
      "parameter manifest lists " + std::to_string(manifest.is_array() ? manifest.size() : 0) +
      " tensors, model has " + std::to_string(params.size()));
  }
  std::uint64_t expected_offset = 0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto & [name, p] = params[k];
    const auto & entry = manifest[k];
    const auto entry_name = entry.at("name").get<std::string>();
    if (entry_name != name) {
      throw std::runtime_error("parameter " + std::to_string(k) + ": expected '" + name +
        "', checkpoint has '" + entry_name + "'");
    }
    const auto shape = entry.at("shape").get<Shape>();
    if (shape != p.shape()) {
      throw std::runtime_error("parameter '" + name + "': shape " + shape_string(shape) +
        " in checkpoint, " + shape_string(p.shape()) + " in model");
    }
    if (entry.at("offset").get<std::uint64_t>() != expected_offset) {
      throw std::runtime_error("parameter '" + name + "': unexpected blob offset");
    }
    std::vector<char> bytes(p.numel() * 8);
    blob.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (blob.gcount() != static_cast<std::streamsize>(bytes.size())) {
      throw std::runtime_error("parameter blob truncated at '" + name + "'");
    }
    Tensor t = p;
    auto d = t.data_mut();
    for (std::size_t i = 0; i < d.size(); ++i) {
      std::uint64_t le = 0;
      std::memcpy(&le, bytes.data() + 8 * i, 8);
      d[i] = std::bit_cast<double>(to_le(le));
    }
    expected_offset += bytes.size();
  }
}

}  // namespace lanepred::nn
