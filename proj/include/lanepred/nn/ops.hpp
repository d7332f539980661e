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

#ifndef LANEPRED__NN__OPS_HPP_
#define LANEPRED__NN__OPS_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lanepred/nn/tensor.hpp"

namespace lanepred::nn
{

class ShapeError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Elementwise, equal shapes.
Tensor add(const Tensor & a, const Tensor & b);
Tensor sub(const Tensor & a, const Tensor & b);
Tensor mul(const Tensor & a, const Tensor & b);
Tensor scale(const Tensor & a, double factor);

Tensor sum(const Tensor & a);
Tensor mean(const Tensor & a);

Tensor relu(const Tensor & a);
Tensor tanh(const Tensor & a);
Tensor sigmoid(const Tensor & a);

Tensor reshape(const Tensor & a, Shape shape);

/// Concatenates along the last axis; all leading dimensions must agree.
Tensor concat(const std::vector<Tensor> & parts);

/// Treats `a` as rows along axis 0 and gathers them (repeats allowed).
Tensor take_rows(const Tensor & a, const std::vector<std::size_t> & rows);

/// [n x k] * [k x m].
Tensor matmul(const Tensor & a, const Tensor & b);

/// y = x W^T + b over the last axis of x; W is [out x in], b is [out].
Tensor linear(const Tensor & x, const Tensor & weight, const Tensor & bias);

/// Numerically stable softmax over the last axis.
Tensor softmax(const Tensor & a);

/**
 * @brief 1D cross-correlation over the time axis.
 *
 * x is [batch x len x in_ch], weight is [units x in_ch x kernel], bias is
 * [units]. Output is [batch x out_len x units] with
 * out_len = (len + 2 padding - kernel) / stride + 1; padding is zeros.
 */
Tensor conv1d(
  const Tensor & x, const Tensor & weight, const Tensor & bias, std::size_t stride,
  std::size_t padding);

/**
 * @brief Single-layer LSTM from a zero state, returning the last hidden state.
 *
 * x is [batch x len x in]; w_ih is [4H x in], w_hh is [4H x H], bias is [4H],
 * with gate blocks ordered input, forget, cell, output. Output is [batch x H].
 */
Tensor lstm(const Tensor & x, const Tensor & w_ih, const Tensor & w_hh, const Tensor & bias);

/// out[b] = sum_n w[b, n] * x[b, n]; x is [B x N x D], w is [B x N].
Tensor weighted_sum(const Tensor & x, const Tensor & w);

/// Elementwise max over each group of rows of a [rows x D] tensor. Groups must be non-empty.
Tensor max_pool_groups(const Tensor & x, const std::vector<std::vector<std::size_t>> & groups);

/// Mean smooth L1 over all elements.
Tensor smooth_l1(const Tensor & pred, const Tensor & target);

/// Mean over the batch of -log(max(p[b, target[b]], floor)); probs is [B x N].
Tensor cross_entropy(
  const Tensor & probs, const std::vector<std::size_t> & target, double floor = 1e-12);

}  // namespace lanepred::nn

#endif  // LANEPRED__NN__OPS_HPP_
