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

#include "lanepred/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "lanepred/nn/ops.hpp"

namespace lanepred::nn
{

Tensor uniform_param(Shape shape, double bound, Rng & rng)
{
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> data(numel(shape));
  for (auto & v : data) {
    v = dist(rng);
  }
  return Tensor::from_data(std::move(shape), std::move(data), true);
}

LinearLayer LinearLayer::create(std::size_t in, std::size_t out, Rng & rng)
{
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  LinearLayer l;
  l.weight = uniform_param({out, in}, bound, rng);
  l.bias = uniform_param({out}, bound, rng);
  return l;
}

Tensor LinearLayer::forward(const Tensor & x) const { return linear(x, weight, bias); }

void LinearLayer::collect(const std::string & prefix, NamedParams & out) const
{
  out.emplace_back(prefix + ".weight", weight);
  out.emplace_back(prefix + ".bias", bias);
}

Conv1dLayer Conv1dLayer::create(
  std::size_t in_ch, std::size_t units, std::size_t kernel, std::size_t stride,
  std::size_t padding, Rng & rng)
{
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_ch * kernel));
  Conv1dLayer l;
  l.weight = uniform_param({units, in_ch, kernel}, bound, rng);
  l.bias = uniform_param({units}, bound, rng);
  l.stride = stride;
  l.padding = padding;
  return l;
}

std::size_t Conv1dLayer::out_len(std::size_t in_len) const
{
  return (in_len + 2 * padding - kernel()) / stride + 1;
}

Tensor Conv1dLayer::forward(const Tensor & x) const
{
  return conv1d(x, weight, bias, stride, padding);
}

void Conv1dLayer::collect(const std::string & prefix, NamedParams & out) const
{
  out.emplace_back(prefix + ".weight", weight);
  out.emplace_back(prefix + ".bias", bias);
}

LstmLayer LstmLayer::create(std::size_t in, std::size_t hidden, Rng & rng)
{
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  LstmLayer l;
  l.w_ih = uniform_param({4 * hidden, in}, bound, rng);
  l.w_hh = uniform_param({4 * hidden, hidden}, bound, rng);
  l.bias = uniform_param({4 * hidden}, bound, rng);
  auto b = l.bias.data_mut();
  std::fill(b.begin() + static_cast<std::ptrdiff_t>(hidden),
    b.begin() + static_cast<std::ptrdiff_t>(2 * hidden), 1.0);
  return l;
}

Tensor LstmLayer::forward(const Tensor & x) const { return lstm(x, w_ih, w_hh, bias); }

void LstmLayer::collect(const std::string & prefix, NamedParams & out) const
{
  out.emplace_back(prefix + ".w_ih", w_ih);
  out.emplace_back(prefix + ".w_hh", w_hh);
  out.emplace_back(prefix + ".bias", bias);
}

void zero_parameters(const NamedParams & params)
{
  for (const auto & [name, p] : params) {
    Tensor t = p;
    auto d = t.data_mut();
    std::fill(d.begin(), d.end(), 0.0);
  }
}

std::size_t parameter_count(const NamedParams & params)
{
  std::size_t n = 0;
  for (const auto & [name, p] : params) {
    n += p.numel();
  }
  return n;
}

}  // namespace lanepred::nn
