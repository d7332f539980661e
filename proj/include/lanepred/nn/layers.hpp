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

#ifndef LANEPRED__NN__LAYERS_HPP_
#define LANEPRED__NN__LAYERS_HPP_

#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lanepred/nn/tensor.hpp"

namespace lanepred::nn
{

using Rng = std::mt19937_64;

/// Ordered (name, parameter) pairs. Order defines serialization layout.
using NamedParams = std::vector<std::pair<std::string, Tensor>>;

/// Leaf tensor of the given shape, uniform in [-bound, bound].
Tensor uniform_param(Shape shape, double bound, Rng & rng);

struct LinearLayer
{
  Tensor weight;  // [out x in]
  Tensor bias;    // [out]

  static LinearLayer create(std::size_t in, std::size_t out, Rng & rng);
  std::size_t in_features() const { return weight.dim(1); }
  std::size_t out_features() const { return weight.dim(0); }
  Tensor forward(const Tensor & x) const;
  void collect(const std::string & prefix, NamedParams & out) const;
};

/// Notation: u{units}-k{kernel}-s{stride}-p{padding}.
struct Conv1dLayer
{
  Tensor weight;  // [units x in_ch x kernel]
  Tensor bias;    // [units]
  std::size_t stride{1};
  std::size_t padding{0};

  static Conv1dLayer create(
    std::size_t in_ch, std::size_t units, std::size_t kernel, std::size_t stride,
    std::size_t padding, Rng & rng);
  std::size_t units() const { return weight.dim(0); }
  std::size_t kernel() const { return weight.dim(2); }
  std::size_t out_len(std::size_t in_len) const;
  Tensor forward(const Tensor & x) const;
  void collect(const std::string & prefix, NamedParams & out) const;
};

/// Gate blocks ordered input, forget, cell, output. Forget bias starts at 1.
struct LstmLayer
{
  Tensor w_ih;  // [4H x in]
  Tensor w_hh;  // [4H x H]
  Tensor bias;  // [4H]

  static LstmLayer create(std::size_t in, std::size_t hidden, Rng & rng);
  std::size_t hidden() const { return w_hh.dim(1); }
  Tensor forward(const Tensor & x) const;
  void collect(const std::string & prefix, NamedParams & out) const;
};

/// Sets every parameter to zero (used by tests and zero-model checkpoints).
void zero_parameters(const NamedParams & params);

std::size_t parameter_count(const NamedParams & params);

}  // namespace lanepred::nn

#endif  // LANEPRED__NN__LAYERS_HPP_
