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

#include "lanepred/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanepred::nn
{

GradCheckReport grad_check(
  const std::function<Tensor()> & f, std::vector<Tensor> inputs, const GradCheckOptions & opts)
{
  for (auto & x : inputs) {
    if (!x.requires_grad()) {
      throw std::invalid_argument("grad_check inputs must require grad");
    }
    x.zero_grad();
  }
  f().backward();
  std::vector<std::vector<double>> analytic;
  for (const auto & x : inputs) {
    analytic.emplace_back(x.grad().begin(), x.grad().end());
  }

  GradCheckReport report;
  NoGradGuard no_grad;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    auto data = inputs[k].data_mut();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double orig = data[i];
      data[i] = orig + opts.step;
      const double fp = f().item();
      data[i] = orig - opts.step;
      const double fm = f().item();
      data[i] = orig;
      const double numeric = (fp - fm) / (2.0 * opts.step);
      const double a = analytic[k][i];
      const double abs_err = std::abs(a - numeric);
      const double rel = abs_err / std::max({std::abs(a), std::abs(numeric), opts.floor});
      report.max_abs_error = std::max(report.max_abs_error, abs_err);
      if (rel > report.max_rel_error || report.checked == 0) {
        report.max_rel_error = rel;
        report.worst_input = k;
        report.worst_index = i;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
      ++report.checked;
    }
  }
  for (auto & x : inputs) {
    x.zero_grad();
  }
  return report;
}

GradCheckReport grad_check(
  const std::function<Tensor(const Tensor &)> & f, Tensor x, const GradCheckOptions & opts)
{
  return grad_check([&f, x]() { return f(x); }, {x}, opts);
}

}  // namespace lanepred::nn
