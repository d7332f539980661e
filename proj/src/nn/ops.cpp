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

#include "lanepred/nn/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace lanepred::nn
{

namespace
{

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using ConstMap = Eigen::Map<const Mat>;
using MutMap = Eigen::Map<Mat>;
using StridedConstMap = Eigen::Map<const Mat, 0, Eigen::OuterStride<>>;
using StridedMutMap = Eigen::Map<Mat, 0, Eigen::OuterStride<>>;

ConstMap cmap(const Buffer & v, std::size_t rows, std::size_t cols)
{
  return ConstMap(v.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

MutMap mmap(Buffer & v, std::size_t rows, std::size_t cols)
{
  return MutMap(v.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

/// Gradient buffer of parent i, or nullptr if it does not take gradients.
Buffer * parent_grad(detail::Node & self, std::size_t i)
{
  auto & p = self.parents[i];
  return p->requires_grad ? &p->grad : nullptr;
}

const Buffer & parent_value(const detail::Node & self, std::size_t i)
{
  return self.parents[i]->value;
}

void require_same_shape(const Tensor & a, const Tensor & b, const char * op)
{
  if (a.shape() != b.shape()) {
    throw ShapeError(
      std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
      shape_string(b.shape()));
  }
}

void require_rank(const Tensor & a, std::size_t rank, const char * op, const char * what)
{
  if (a.rank() != rank) {
    throw ShapeError(
      std::string(op) + ": " + what + " must have rank " + std::to_string(rank) + ", got " +
      shape_string(a.shape()));
  }
}

std::size_t leading_rows(const Tensor & a)
{
  return a.numel() / a.dim(-1);
}

/// out[c] += sum_r m[r, c], rows visited in order so the result never depends
/// on buffer alignment.
void add_row_sums(
  const Buffer & m, std::size_t rows, std::size_t cols, Buffer & out)
{
  for (std::size_t r = 0; r < rows; ++r) {
    const double * row = m.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      out[c] += row[c];
    }
  }
}

template<typename Fwd, typename Dfn>
Tensor unary(const Tensor & a, Fwd fwd, Dfn dydx_from_y)
{
  Buffer out(a.numel());
  const auto in = a.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = fwd(in[i]);
  }
  return Tensor::make_result(a.shape(), std::move(out), {a}, [dydx_from_y](detail::Node & self) {
      auto * g = parent_grad(self, 0);
      const auto & x = parent_value(self, 0);
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        (*g)[i] += self.grad[i] * dydx_from_y(x[i], self.value[i]);
      }
    });
}

}  // namespace

Tensor add(const Tensor & a, const Tensor & b)
{
  require_same_shape(a, b, "add");
  Buffer out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a.data()[i] + b.data()[i];
  }
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](detail::Node & self) {
      for (std::size_t p = 0; p < 2; ++p) {
        if (auto * g = parent_grad(self, p)) {
          for (std::size_t i = 0; i < self.grad.size(); ++i) {
            (*g)[i] += self.grad[i];
          }
        }
      }
    });
}

Tensor sub(const Tensor & a, const Tensor & b)
{
  require_same_shape(a, b, "sub");
  Buffer out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a.data()[i] - b.data()[i];
  }
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](detail::Node & self) {
      if (auto * g = parent_grad(self, 0)) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          (*g)[i] += self.grad[i];
        }
      }
      if (auto * g = parent_grad(self, 1)) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          (*g)[i] -= self.grad[i];
        }
      }
    });
}

Tensor mul(const Tensor & a, const Tensor & b)
{
  require_same_shape(a, b, "mul");
  Buffer out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a.data()[i] * b.data()[i];
  }
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](detail::Node & self) {
      const auto & av = parent_value(self, 0);
      const auto & bv = parent_value(self, 1);
      if (auto * g = parent_grad(self, 0)) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          (*g)[i] += self.grad[i] * bv[i];
        }
      }
      if (auto * g = parent_grad(self, 1)) {
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
          (*g)[i] += self.grad[i] * av[i];
        }
      }
    });
}

Tensor scale(const Tensor & a, double factor)
{
  Buffer out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a.data()[i] * factor;
  }
  return Tensor::make_result(a.shape(), std::move(out), {a}, [factor](detail::Node & self) {
      auto * g = parent_grad(self, 0);
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        (*g)[i] += self.grad[i] * factor;
      }
    });
}

Tensor sum(const Tensor & a)
{
  double s = 0.0;
  for (const double v : a.data()) {
    s += v;
  }
  return Tensor::make_result({1}, {s}, {a}, [](detail::Node & self) {
      auto * g = parent_grad(self, 0);
      for (auto & v : *g) {
        v += self.grad[0];
      }
    });
}

Tensor mean(const Tensor & a)
{
  return scale(sum(a), 1.0 / static_cast<double>(a.numel()));
}

Tensor relu(const Tensor & a)
{
  return unary(
    a, [](double x) { return x > 0.0 ? x : 0.0; },
    [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor tanh(const Tensor & a)
{
  return unary(
    a, [](double x) { return std::tanh(x); },
    [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor & a)
{
  return unary(
    a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
    [](double, double y) { return y * (1.0 - y); });
}

Tensor reshape(const Tensor & a, Shape shape)
{
  if (numel(shape) != a.numel()) {
    throw ShapeError(
      "reshape: cannot view " + shape_string(a.shape()) + " as " + shape_string(shape));
  }
  Buffer out(a.data().begin(), a.data().end());
  return Tensor::make_result(std::move(shape), std::move(out), {a}, [](detail::Node & self) {
      auto * g = parent_grad(self, 0);
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        (*g)[i] += self.grad[i];
      }
    });
}

Tensor concat(const std::vector<Tensor> & parts)
{
  if (parts.empty()) {
    throw ShapeError("concat: no inputs");
  }
  Shape lead = parts.front().shape();
  lead.pop_back();
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const auto & p : parts) {
    Shape l = p.shape();
    l.pop_back();
    if (l != lead) {
      throw ShapeError(
        "concat: leading dims differ, " + shape_string(parts.front().shape()) + " vs " +
        shape_string(p.shape()));
    }
    widths.push_back(p.dim(-1));
    total += p.dim(-1);
  }
  const std::size_t rows = numel(lead);
  Buffer out(rows * total);
  std::size_t col = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto src = parts[k].data();
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(r * widths[k]), widths[k],
        out.begin() + static_cast<std::ptrdiff_t>(r * total + col));
    }
    col += widths[k];
  }
  Shape shape = lead;
  shape.push_back(total);
  return Tensor::make_result(
    std::move(shape), std::move(out), parts, [widths, rows, total](detail::Node & self) {
      std::size_t col = 0;
      for (std::size_t k = 0; k < widths.size(); ++k) {
        if (auto * g = parent_grad(self, k)) {
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < widths[k]; ++c) {
              (*g)[r * widths[k] + c] += self.grad[r * total + col + c];
            }
          }
        }
        col += widths[k];
      }
    });
}

Tensor take_rows(const Tensor & a, const std::vector<std::size_t> & rows)
{
  if (rows.empty()) {
    throw ShapeError("take_rows: empty row list");
  }
  const std::size_t n = a.dim(0);
  const std::size_t width = a.numel() / n;
  Buffer out(rows.size() * width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= n) {
      throw ShapeError(
        "take_rows: row " + std::to_string(rows[i]) + " out of range for " +
        shape_string(a.shape()));
    }
    std::copy_n(a.data().begin() + static_cast<std::ptrdiff_t>(rows[i] * width), width,
      out.begin() + static_cast<std::ptrdiff_t>(i * width));
  }
  Shape shape = a.shape();
  shape[0] = rows.size();
  return Tensor::make_result(std::move(shape), std::move(out), {a},
    [rows, width](detail::Node & self) {
      auto * g = parent_grad(self, 0);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < width; ++c) {
          (*g)[rows[i] * width + c] += self.grad[i * width + c];
        }
      }
    });
}

Tensor matmul(const Tensor & a, const Tensor & b)
{
  require_rank(a, 2, "matmul", "lhs");
  require_rank(b, 2, "matmul", "rhs");
  const std::size_t n = a.dim(0);
  const std::size_t k = a.dim(1);
  const std::size_t m = b.dim(1);
  if (b.dim(0) != k) {
    throw ShapeError(
      "matmul: inner dims differ, " + shape_string(a.shape()) + " x " + shape_string(b.shape()));
  }
  Buffer out(n * m);
  mmap(out, n, m).noalias() = cmap(a.node()->value, n, k) * cmap(b.node()->value, k, m);
  return Tensor::make_result({n, m}, std::move(out), {a, b}, [n, k, m](detail::Node & self) {
      const auto dy = cmap(self.grad, n, m);
      if (auto * g = parent_grad(self, 0)) {
        mmap(*g, n, k).noalias() += dy * cmap(parent_value(self, 1), k, m).transpose();
      }
      if (auto * g = parent_grad(self, 1)) {
        mmap(*g, k, m).noalias() += cmap(parent_value(self, 0), n, k).transpose() * dy;
      }
    });
}

Tensor linear(const Tensor & x, const Tensor & weight, const Tensor & bias)
{
  require_rank(weight, 2, "linear", "weight");
  require_rank(bias, 1, "linear", "bias");
  const std::size_t in = weight.dim(1);
  const std::size_t out_dim = weight.dim(0);
  if (x.dim(-1) != in || bias.dim(0) != out_dim) {
    throw ShapeError(
      "linear: input " + shape_string(x.shape()) + " incompatible with weight " +
      shape_string(weight.shape()) + " and bias " + shape_string(bias.shape()));
  }
  const std::size_t rows = leading_rows(x);
  Buffer out(rows * out_dim);
  auto y = mmap(out, rows, out_dim);
  y.noalias() = cmap(x.node()->value, rows, in) * cmap(weight.node()->value, out_dim, in).transpose();
  y.rowwise() += cmap(bias.node()->value, 1, out_dim).row(0);
  Shape shape = x.shape();
  shape.back() = out_dim;
  return Tensor::make_result(
    std::move(shape), std::move(out), {x, weight, bias}, [rows, in, out_dim](detail::Node & self) {
      const auto dy = cmap(self.grad, rows, out_dim);
      if (auto * g = parent_grad(self, 0)) {
        mmap(*g, rows, in).noalias() += dy * cmap(parent_value(self, 1), out_dim, in);
      }
      if (auto * g = parent_grad(self, 1)) {
        mmap(*g, out_dim, in).noalias() += dy.transpose() * cmap(parent_value(self, 0), rows, in);
      }
      if (auto * g = parent_grad(self, 2)) {
        add_row_sums(self.grad, rows, out_dim, *g);
      }
    });
}

Tensor softmax(const Tensor & a)
{
  const std::size_t n = a.dim(-1);
  const std::size_t rows = leading_rows(a);
  Buffer out(a.numel());
  const auto in = a.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double * x = in.data() + r * n;
    double * y = out.data() + r * n;
    const double mx = *std::max_element(x, x + n);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = std::exp(x[i] - mx);
      z += y[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= z;
    }
  }
  return Tensor::make_result(a.shape(), std::move(out), {a}, [rows, n](detail::Node & self) {
      auto * g = parent_grad(self, 0);
      for (std::size_t r = 0; r < rows; ++r) {
        const double * y = self.value.data() + r * n;
        const double * dy = self.grad.data() + r * n;
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          dot += dy[i] * y[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
          (*g)[r * n + i] += y[i] * (dy[i] - dot);
        }
      }
    });
}

Tensor conv1d(
  const Tensor & x, const Tensor & weight, const Tensor & bias, std::size_t stride,
  std::size_t padding)
{
  require_rank(x, 3, "conv1d", "input");
  require_rank(weight, 3, "conv1d", "weight");
  require_rank(bias, 1, "conv1d", "bias");
  const std::size_t B = x.dim(0);
  const std::size_t L = x.dim(1);
  const std::size_t C = x.dim(2);
  const std::size_t U = weight.dim(0);
  const std::size_t K = weight.dim(2);
  if (weight.dim(1) != C || bias.dim(0) != U) {
    throw ShapeError(
      "conv1d: input channels " + std::to_string(C) + " vs weight " +
      shape_string(weight.shape()) + ", bias " + shape_string(bias.shape()));
  }
  if (stride == 0) {
    throw ShapeError("conv1d: stride must be positive");
  }
  if (L + 2 * padding < K) {
    throw ShapeError(
      "conv1d: input length " + std::to_string(L) + " with padding " + std::to_string(padding) +
      " is shorter than kernel " + std::to_string(K));
  }
  const std::size_t Lout = (L + 2 * padding - K) / stride + 1;
  const std::size_t CK = C * K;
  const std::size_t rows = B * Lout;

  // im2col: column c*K + j holds x[b, o*stride - padding + j, c].
  auto cols = std::make_shared<Buffer>(rows * CK, 0.0);
  const auto xv = x.data();
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t o = 0; o < Lout; ++o) {
      double * dst = cols->data() + (b * Lout + o) * CK;
      for (std::size_t j = 0; j < K; ++j) {
        const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(o * stride + j) -
          static_cast<std::ptrdiff_t>(padding);
        if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(L)) {
          continue;
        }
        const double * src = xv.data() + (b * L + static_cast<std::size_t>(pos)) * C;
        for (std::size_t c = 0; c < C; ++c) {
          dst[c * K + j] = src[c];
        }
      }
    }
  }
  Buffer out(rows * U);
  auto y = mmap(out, rows, U);
  y.noalias() = cmap(*cols, rows, CK) * cmap(weight.node()->value, U, CK).transpose();
  y.rowwise() += cmap(bias.node()->value, 1, U).row(0);

  return Tensor::make_result(
    {B, Lout, U}, std::move(out), {x, weight, bias},
    [cols, B, L, C, K, U, Lout, CK, rows, stride, padding](detail::Node & self) {
      const auto dy = cmap(self.grad, rows, U);
      if (auto * g = parent_grad(self, 1)) {
        mmap(*g, U, CK).noalias() += dy.transpose() * cmap(*cols, rows, CK);
      }
      if (auto * g = parent_grad(self, 2)) {
        add_row_sums(self.grad, rows, U, *g);
      }
      if (auto * g = parent_grad(self, 0)) {
        Mat dcols = dy * cmap(parent_value(self, 1), U, CK);
        for (std::size_t b = 0; b < B; ++b) {
          for (std::size_t o = 0; o < Lout; ++o) {
            const double * src = dcols.data() + (b * Lout + o) * CK;
            for (std::size_t j = 0; j < K; ++j) {
              const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(o * stride + j) -
                static_cast<std::ptrdiff_t>(padding);
              if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(L)) {
                continue;
              }
              double * dst = g->data() + (b * L + static_cast<std::size_t>(pos)) * C;
              for (std::size_t c = 0; c < C; ++c) {
                dst[c] += src[c * K + j];
              }
            }
          }
        }
      }
    });
}

Tensor lstm(const Tensor & x, const Tensor & w_ih, const Tensor & w_hh, const Tensor & bias)
{
  require_rank(x, 3, "lstm", "input");
  require_rank(w_ih, 2, "lstm", "w_ih");
  require_rank(w_hh, 2, "lstm", "w_hh");
  require_rank(bias, 1, "lstm", "bias");
  const std::size_t B = x.dim(0);
  const std::size_t T = x.dim(1);
  const std::size_t D = x.dim(2);
  const std::size_t H = w_hh.dim(1);
  const std::size_t G = 4 * H;
  if (w_hh.dim(0) != G || w_ih.dim(0) != G || w_ih.dim(1) != D || bias.dim(0) != G) {
    throw ShapeError(
      "lstm: input " + shape_string(x.shape()) + " incompatible with w_ih " +
      shape_string(w_ih.shape()) + ", w_hh " + shape_string(w_hh.shape()) + ", bias " +
      shape_string(bias.shape()));
  }
  const Eigen::Index b_ = static_cast<Eigen::Index>(B);
  const Eigen::Index h_ = static_cast<Eigen::Index>(H);
  const Eigen::Index g_ = static_cast<Eigen::Index>(G);
  const Eigen::OuterStride<> gate_stride(static_cast<Eigen::Index>(T * G));
  const Eigen::OuterStride<> state_stride(static_cast<Eigen::Index>(T * H));

  // Saved per step in [B x T x .] layout so whole-sequence GEMMs work in backward.
  struct Saved
  {
    Buffer acts;    // post-activation gates i, f, g, o
    Buffer h_prev;  // h_{t-1}
    Buffer c_prev;  // c_{t-1}
    Buffer tanh_c;  // tanh(c_t)
  };
  auto saved = std::make_shared<Saved>();
  saved->acts.resize(B * T * G);
  saved->h_prev.resize(B * T * H);
  saved->c_prev.resize(B * T * H);
  saved->tanh_c.resize(B * T * H);

  auto pre = mmap(saved->acts, B * T, G);
  pre.noalias() = cmap(x.node()->value, B * T, D) * cmap(w_ih.node()->value, G, D).transpose();
  pre.rowwise() += cmap(bias.node()->value, 1, G).row(0);

  const auto whh_t = cmap(w_hh.node()->value, G, H).transpose();
  auto sigmoid_inplace = [](auto && a) { a = (1.0 + (-a).exp()).inverse(); };
  // tanh(v) = 2 sigmoid(2v) - 1 keeps the exponential vectorized.
  auto tanh_of = [](const auto & a) { return 2.0 * (1.0 + (-2.0 * a).exp()).inverse() - 1.0; };

  Mat h = Mat::Zero(b_, h_);
  Mat c = Mat::Zero(b_, h_);
  for (std::size_t t = 0; t < T; ++t) {
    StridedMutMap acts_t(saved->acts.data() + t * G, b_, g_, gate_stride);
    StridedMutMap(saved->h_prev.data() + t * H, b_, h_, state_stride) = h;
    StridedMutMap(saved->c_prev.data() + t * H, b_, h_, state_stride) = c;
    acts_t.noalias() += h * whh_t;
    auto a = acts_t.array();
    sigmoid_inplace(a.leftCols(2 * h_));
    a.middleCols(2 * h_, h_) = tanh_of(a.middleCols(2 * h_, h_));
    sigmoid_inplace(a.rightCols(h_));
    c.array() = a.middleCols(h_, h_) * c.array() + a.leftCols(h_) * a.middleCols(2 * h_, h_);
    StridedMutMap tc(saved->tanh_c.data() + t * H, b_, h_, state_stride);
    tc.array() = tanh_of(c.array());
    h.array() = a.rightCols(h_) * tc.array();
  }
  Buffer out(h.data(), h.data() + B * H);

  return Tensor::make_result(
    {B, H}, std::move(out), {x, w_ih, w_hh, bias},
    [saved, B, T, D, H, G, b_, h_, g_, gate_stride, state_stride](detail::Node & self) {
      const auto w_hh_m = cmap(parent_value(self, 2), G, H);
      Buffer dpre(B * T * G);
      Mat dh = cmap(self.grad, B, H);
      Mat dc = Mat::Zero(b_, h_);
      Mat dct(b_, h_);
      for (std::size_t tt = T; tt-- > 0;) {
        const auto a =
          StridedConstMap(saved->acts.data() + tt * G, b_, g_, gate_stride).array();
        const auto tc =
          StridedConstMap(saved->tanh_c.data() + tt * H, b_, h_, state_stride).array();
        const auto cp =
          StridedConstMap(saved->c_prev.data() + tt * H, b_, h_, state_stride).array();
        auto d = StridedMutMap(dpre.data() + tt * G, b_, g_, gate_stride).array();
        const auto i = a.leftCols(h_);
        const auto f = a.middleCols(h_, h_);
        const auto g = a.middleCols(2 * h_, h_);
        const auto o = a.rightCols(h_);
        dct.array() = dc.array() + dh.array() * o * (1.0 - tc.square());
        d.leftCols(h_) = dct.array() * g * i * (1.0 - i);
        d.middleCols(h_, h_) = dct.array() * cp * f * (1.0 - f);
        d.middleCols(2 * h_, h_) = dct.array() * i * (1.0 - g.square());
        d.rightCols(h_) = dh.array() * tc * o * (1.0 - o);
        dc.array() = dct.array() * f;
        if (tt > 0) {
          dh.noalias() = StridedConstMap(dpre.data() + tt * G, b_, g_, gate_stride) * w_hh_m;
        }
      }
      const auto dpre_m = cmap(dpre, B * T, G);
      if (auto * gx = parent_grad(self, 0)) {
        mmap(*gx, B * T, D).noalias() += dpre_m * cmap(parent_value(self, 1), G, D);
      }
      if (auto * gw = parent_grad(self, 1)) {
        mmap(*gw, G, D).noalias() += dpre_m.transpose() * cmap(parent_value(self, 0), B * T, D);
      }
      if (auto * gh = parent_grad(self, 2)) {
        mmap(*gh, G, H).noalias() += dpre_m.transpose() * cmap(saved->h_prev, B * T, H);
      }
      if (auto * gb = parent_grad(self, 3)) {
        add_row_sums(dpre, B * T, G, *gb);
      }
    });
}

Tensor weighted_sum(const Tensor & x, const Tensor & w)
{
  require_rank(x, 3, "weighted_sum", "features");
  require_rank(w, 2, "weighted_sum", "weights");
  const std::size_t B = x.dim(0);
  const std::size_t N = x.dim(1);
  const std::size_t D = x.dim(2);
  if (w.dim(0) != B || w.dim(1) != N) {
    throw ShapeError(
      "weighted_sum: weights " + shape_string(w.shape()) + " do not match features " +
      shape_string(x.shape()));
  }
  Buffer out(B * D, 0.0);
  const auto xv = x.data();
  const auto wv = w.data();
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t n = 0; n < N; ++n) {
      const double wn = wv[b * N + n];
      const double * row = xv.data() + (b * N + n) * D;
      for (std::size_t d = 0; d < D; ++d) {
        out[b * D + d] += wn * row[d];
      }
    }
  }
  return Tensor::make_result({B, D}, std::move(out), {x, w}, [B, N, D](detail::Node & self) {
      const auto & xv = parent_value(self, 0);
      const auto & wv = parent_value(self, 1);
      auto * gx = parent_grad(self, 0);
      auto * gw = parent_grad(self, 1);
      for (std::size_t b = 0; b < B; ++b) {
        const double * dy = self.grad.data() + b * D;
        for (std::size_t n = 0; n < N; ++n) {
          const std::size_t r = (b * N + n) * D;
          if (gx) {
            const double wn = wv[b * N + n];
            for (std::size_t d = 0; d < D; ++d) {
              (*gx)[r + d] += wn * dy[d];
            }
          }
          if (gw) {
            double acc = 0.0;
            for (std::size_t d = 0; d < D; ++d) {
              acc += xv[r + d] * dy[d];
            }
            (*gw)[b * N + n] += acc;
          }
        }
      }
    });
}

Tensor max_pool_groups(const Tensor & x, const std::vector<std::vector<std::size_t>> & groups)
{
  require_rank(x, 2, "max_pool_groups", "input");
  const std::size_t R = x.dim(0);
  const std::size_t D = x.dim(1);
  if (groups.empty()) {
    throw ShapeError("max_pool_groups: no groups");
  }
  Buffer out(groups.size() * D);
  std::vector<std::size_t> arg(groups.size() * D);
  const auto xv = x.data();
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto & members = groups[gi];
    if (members.empty()) {
      throw ShapeError("max_pool_groups: group " + std::to_string(gi) + " is empty");
    }
    for (const auto r : members) {
      if (r >= R) {
        throw ShapeError("max_pool_groups: row " + std::to_string(r) + " out of range");
      }
    }
    for (std::size_t d = 0; d < D; ++d) {
      std::size_t best = members.front();
      for (const auto r : members) {
        if (xv[r * D + d] > xv[best * D + d]) {
          best = r;
        }
      }
      out[gi * D + d] = xv[best * D + d];
      arg[gi * D + d] = best;
    }
  }
  return Tensor::make_result(
    {groups.size(), D}, std::move(out), {x}, [arg = std::move(arg), D](detail::Node & self) {
      auto * g = parent_grad(self, 0);
      for (std::size_t i = 0; i < arg.size(); ++i) {
        (*g)[arg[i] * D + i % D] += self.grad[i];
      }
    });
}

Tensor smooth_l1(const Tensor & pred, const Tensor & target)
{
  require_same_shape(pred, target, "smooth_l1");
  const std::size_t n = pred.numel();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred.data()[i] - target.data()[i];
    const double a = std::abs(d);
    acc += a < 1.0 ? 0.5 * d * d : a - 0.5;
  }
  return Tensor::make_result(
    {1}, {acc / static_cast<double>(n)}, {pred, target}, [n](detail::Node & self) {
      const auto & p = parent_value(self, 0);
      const auto & t = parent_value(self, 1);
      auto * gp = parent_grad(self, 0);
      auto * gt = parent_grad(self, 1);
      const double s = self.grad[0] / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double d = p[i] - t[i];
        const double slope = std::abs(d) < 1.0 ? d : (d > 0.0 ? 1.0 : -1.0);
        if (gp) {
          (*gp)[i] += s * slope;
        }
        if (gt) {
          (*gt)[i] -= s * slope;
        }
      }
    });
}

Tensor cross_entropy(
  const Tensor & probs, const std::vector<std::size_t> & target, double floor)
{
  require_rank(probs, 2, "cross_entropy", "probabilities");
  const std::size_t B = probs.dim(0);
  const std::size_t N = probs.dim(1);
  if (target.size() != B) {
    throw ShapeError(
      "cross_entropy: " + std::to_string(target.size()) + " targets for batch of " +
      std::to_string(B));
  }
  double acc = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    if (target[b] >= N) {
      throw std::out_of_range(
        "cross_entropy: target index " + std::to_string(target[b]) + " out of range for " +
        std::to_string(N) + " classes");
    }
    acc -= std::log(std::max(probs.data()[b * N + target[b]], floor));
  }
  return Tensor::make_result(
    {1}, {acc / static_cast<double>(B)}, {probs}, [target, B, N, floor](detail::Node & self) {
      const auto & p = parent_value(self, 0);
      auto * g = parent_grad(self, 0);
      const double s = self.grad[0] / static_cast<double>(B);
      for (std::size_t b = 0; b < B; ++b) {
        const double v = p[b * N + target[b]];
        if (v > floor) {
          (*g)[b * N + target[b]] -= s / v;
        }
      }
    });
}

}  // namespace lanepred::nn
