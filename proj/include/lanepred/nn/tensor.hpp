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

#ifndef LANEPRED__NN__TENSOR_HPP_
#define LANEPRED__NN__TENSOR_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

namespace lanepred::nn
{

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape & shape);

/// Allocates on 64-byte boundaries. Vectorized kernels peel a different number
/// of leading elements depending on alignment, so fixed alignment keeps results
/// identical from run to run.
template<typename T>
struct AlignedAllocator
{
  using value_type = T;
  static constexpr std::align_val_t kAlign{64};

  AlignedAllocator() = default;
  template<typename U>
  AlignedAllocator(const AlignedAllocator<U> &) noexcept {}

  T * allocate(std::size_t n)
  {
    return static_cast<T *>(::operator new(n * sizeof(T), kAlign));
  }
  void deallocate(T * p, std::size_t) noexcept { ::operator delete(p, kAlign); }

  template<typename U>
  bool operator==(const AlignedAllocator<U> &) const noexcept { return true; }
};

using Buffer = std::vector<double, AlignedAllocator<double>>;
std::string shape_string(const Shape & shape);

namespace detail
{

struct Node
{
  Shape shape;
  Buffer value;
  Buffer grad;  // empty until first needed
  bool requires_grad{false};
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into the parents' grads.
  std::function<void(Node &)> backward;

  Buffer & ensure_grad();
};

}  // namespace detail

/**
 * @brief Dense row-major float64 array that records a reverse-mode graph.
 *
 * Tensors are cheap handles to shared storage. An operation whose inputs
 * require gradients produces a result that remembers its parents and a
 * backward function; backward() on a scalar walks that graph once and then
 * releases it. Leaf tensors created with requires_grad accumulate gradients
 * until zero_grad().
 */
class Tensor
{
public:
  using BackwardFn = std::function<void(detail::Node &)>;

  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from_data(Shape shape, std::vector<double> data, bool requires_grad = false);
  static Tensor from_buffer(Shape shape, Buffer data, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  /// Builds an op result. Parents and `fn` are kept only if gradients are enabled
  /// and some parent requires them.
  static Tensor make_result(
    Shape shape, Buffer value, const std::vector<Tensor> & parents, BackwardFn fn);

  bool defined() const { return static_cast<bool>(node_); }
  const Shape & shape() const;
  std::size_t rank() const { return shape().size(); }
  /// Size of dimension `axis`; negative axes count from the back.
  std::size_t dim(int axis) const;
  std::size_t numel() const;

  std::span<const double> data() const;
  /// Writable storage. Meant for leaves (initialization, optimizer updates).
  std::span<double> data_mut();
  double item() const;

  bool requires_grad() const;
  void set_requires_grad(bool on);
  bool has_grad() const;
  std::span<const double> grad() const;
  std::span<double> grad_mut();
  void zero_grad();

  /// Back-propagates from this scalar. Throws std::invalid_argument otherwise.
  void backward() const;

  /// Same values, no graph.
  Tensor detach() const;

  const std::shared_ptr<detail::Node> & node() const { return node_; }

private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;
};

bool grad_enabled();

/// Disables graph recording on this thread for its lifetime.
class NoGradGuard
{
public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard &) = delete;
  NoGradGuard & operator=(const NoGradGuard &) = delete;

private:
  bool previous_;
};

}  // namespace lanepred::nn

#endif  // LANEPRED__NN__TENSOR_HPP_
