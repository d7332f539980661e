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

#ifndef LANEPRED__NN__GRAD_CHECK_HPP_
#define LANEPRED__NN__GRAD_CHECK_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "lanepred/nn/tensor.hpp"

namespace lanepred::nn
{

struct GradCheckOptions
{
  double step{1e-3};
  /// Relative error is |a - n| / max(|a|, |n|, floor).
  double floor{1e-6};
};

struct GradCheckReport
{
  double max_rel_error{0.0};
  double max_abs_error{0.0};
  std::size_t worst_input{0};
  std::size_t worst_index{0};
  double worst_analytic{0.0};
  double worst_numeric{0.0};
  std::size_t checked{0};

  bool passed(double tol) const { return max_rel_error < tol; }
};

/**
 * @brief Compares backward() gradients of a scalar function with central differences.
 *
 * `f` must rebuild its graph from the current values of `inputs` on every call;
 * the inputs are perturbed in place and restored.
 */
GradCheckReport grad_check(
  const std::function<Tensor()> & f, std::vector<Tensor> inputs,
  const GradCheckOptions & opts = {});

GradCheckReport grad_check(
  const std::function<Tensor(const Tensor &)> & f, Tensor x, const GradCheckOptions & opts = {});

}  // namespace lanepred::nn

#endif  // LANEPRED__NN__GRAD_CHECK_HPP_
