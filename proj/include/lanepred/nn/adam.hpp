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

#ifndef LANEPRED__NN__ADAM_HPP_
#define LANEPRED__NN__ADAM_HPP_

#include <cstdint>
#include <vector>

#include "lanepred/nn/tensor.hpp"

namespace lanepred::nn
{

struct AdamConfig
{
  double lr{3e-4};
  double beta1{0.9};
  double beta2{0.999};
  double eps{1e-8};

  void validate() const;
};

/// Bias-corrected Adam. step() consumes the accumulated gradients and zeroes them.
class Adam
{
public:
  Adam(std::vector<Tensor> params, AdamConfig cfg = {});

  void step();
  void zero_grad();

  double lr() const { return cfg_.lr; }
  void set_lr(double lr) { cfg_.lr = lr; }
  std::int64_t step_count() const { return t_; }
  const AdamConfig & config() const { return cfg_; }
  const std::vector<std::vector<double>> & first_moments() const { return m_; }
  const std::vector<std::vector<double>> & second_moments() const { return v_; }

private:
  std::vector<Tensor> params_;
  AdamConfig cfg_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::int64_t t_{0};
};

}  // namespace lanepred::nn

#endif  // LANEPRED__NN__ADAM_HPP_
