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

#include "lanepred/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace lanepred::nn
{

namespace
{
thread_local bool g_grad_enabled = true;
}  // namespace

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

std::size_t numel(const Shape & shape)
{
  std::size_t n = 1;
  for (const auto d : shape) {
    n *= d;
  }
  return n;
}

std::string shape_string(const Shape & shape)
{
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    os << (i ? " x " : "") << shape[i];
  }
  os << ']';
  return os.str();
}

Buffer & detail::Node::ensure_grad()
{
  if (grad.size() != value.size()) {
    grad.assign(value.size(), 0.0);
  }
  return grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad)
{
  return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad)
{
  const std::size_t n = nn::numel(shape);
  return from_buffer(std::move(shape), Buffer(n, value), requires_grad);
}

Tensor Tensor::from_data(Shape shape, std::vector<double> data, bool requires_grad)
{
  return from_buffer(std::move(shape), Buffer(data.begin(), data.end()), requires_grad);
}

Tensor Tensor::from_buffer(Shape shape, Buffer data, bool requires_grad)
{
  for (const auto d : shape) {
    if (d == 0) {
      throw std::invalid_argument("tensor dimensions must be positive, got " + shape_string(shape));
    }
  }
  if (nn::numel(shape) != data.size()) {
    throw std::invalid_argument(
      "tensor data length " + std::to_string(data.size()) + " does not match shape " +
      shape_string(shape));
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->value = std::move(data);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value, bool requires_grad)
{
  return from_buffer({1}, Buffer{value}, requires_grad);
}

Tensor Tensor::make_result(
  Shape shape, Buffer value, const std::vector<Tensor> & parents, BackwardFn fn)
{
#ifndef NDEBUG
  for (const double v : value) {
    if (!std::isfinite(v)) {
      throw std::domain_error("non-finite value produced by tensor op");
    }
  }
#endif
  Tensor out = from_buffer(std::move(shape), std::move(value), false);
  if (!g_grad_enabled) {
    return out;
  }
  const bool any = std::any_of(
    parents.begin(), parents.end(), [](const Tensor & p) { return p.requires_grad(); });
  if (any) {
    out.node_->requires_grad = true;
    for (const auto & p : parents) {
      out.node_->parents.push_back(p.node_);
    }
    out.node_->backward = std::move(fn);
  }
  return out;
}

const Shape & Tensor::shape() const { return node_->shape; }

std::size_t Tensor::dim(int axis) const
{
  const auto & s = shape();
  const int r = static_cast<int>(s.size());
  const int a = axis < 0 ? axis + r : axis;
  if (a < 0 || a >= r) {
    throw std::out_of_range("axis " + std::to_string(axis) + " out of range for " +
      shape_string(s));
  }
  return s[static_cast<std::size_t>(a)];
}

std::size_t Tensor::numel() const { return node_->value.size(); }

std::span<const double> Tensor::data() const { return node_->value; }
std::span<double> Tensor::data_mut() { return node_->value; }

double Tensor::item() const
{
  if (numel() != 1) {
    throw std::invalid_argument("item() on tensor of shape " + shape_string(shape()));
  }
  return node_->value[0];
}

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }
void Tensor::set_requires_grad(bool on) { node_->requires_grad = on; }
bool Tensor::has_grad() const { return node_->grad.size() == node_->value.size(); }

std::span<const double> Tensor::grad() const
{
  return node_->ensure_grad();
}

std::span<double> Tensor::grad_mut() { return node_->ensure_grad(); }

void Tensor::zero_grad()
{
  if (!node_->grad.empty()) {
    std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
  }
}

Tensor Tensor::detach() const
{
  return from_buffer(shape(), node_->value, false);
}

void Tensor::backward() const
{
  if (numel() != 1) {
    throw std::invalid_argument(
      "backward() needs a scalar, got shape " + shape_string(shape()));
  }
  if (!node_->requires_grad) {
    throw std::invalid_argument("backward() on a tensor that does not require grad");
  }

  // Post-order over the recorded graph. Owning handles keep every node alive
  // while parents are released below.
  std::vector<std::shared_ptr<detail::Node>> order;
  std::unordered_set<detail::Node *> visited;
  std::vector<std::pair<std::shared_ptr<detail::Node>, std::size_t>> stack{{node_, 0}};
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto & [node, next] = stack.back();
    if (next < node->parents.size()) {
      const auto & parent = node->parents[next++];
      if (parent->requires_grad && visited.insert(parent.get()).second) {
        stack.emplace_back(parent, 0);
      }
      continue;
    }
    order.push_back(std::move(node));
    stack.pop_back();
  }

  node_->ensure_grad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node & node = **it;
    if (!node.backward) {
      continue;
    }
    for (auto & p : node.parents) {
      if (p->requires_grad) {
        p->ensure_grad();
      }
    }
    node.backward(node);
    node.backward = nullptr;
    node.parents.clear();
  }
}

}  // namespace lanepred::nn
