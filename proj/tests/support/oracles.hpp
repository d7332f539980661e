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

#ifndef LANEPRED__TESTS__SUPPORT__ORACLES_HPP_
#define LANEPRED__TESTS__SUPPORT__ORACLES_HPP_

// Straightforward reference implementations. They deliberately avoid the
// library's own helpers so that agreement means something.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace lanepred::testing::oracle
{

struct Xy
{
  double x;
  double y;
};

// hypot rather than sqrt(dx^2 + dy^2): the two differ in the last bit and
// metric comparisons are exact.
inline double dist(const Xy & a, const Xy & b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// sum_i w(i) * min_m |f_i - L_m| with a plain double loop.
inline double weighted_lane_distance(
  const std::vector<Xy> & future, const std::vector<Xy> & lane, bool linear_weights)
{
  double total = 0.0;
  for (std::size_t i = 0; i < future.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto & p : lane) {
      best = std::min(best, dist(future[i], p));
    }
    total += (linear_weights ? static_cast<double>(i + 1) : 1.0) * best;
  }
  return total;
}

/// Index of the smallest distance; values within 1e-12 relative count as ties.
inline std::size_t label(
  const std::vector<Xy> & future, const std::vector<std::vector<Xy>> & lanes,
  bool linear_weights)
{
  std::vector<double> d;
  for (const auto & l : lanes) {
    d.push_back(weighted_lane_distance(future, l, linear_weights));
  }
  const double lo = *std::min_element(d.begin(), d.end());
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (d[n] <= lo + 1e-12 * std::max(1.0, std::abs(lo))) {
      return n;
    }
  }
  return 0;
}

struct AdeFde
{
  double ade;
  double fde;
};

/// Exhaustive best-of-k: every hypothesis, every step.
inline AdeFde min_ade_fde(
  const std::vector<std::vector<Xy>> & preds, const std::vector<Xy> & gt, std::size_t k)
{
  AdeFde out{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j < k; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      sum += dist(preds[j][i], gt[i]);
    }
    out.ade = std::min(out.ade, sum / static_cast<double>(gt.size()));
    out.fde = std::min(out.fde, dist(preds[j].back(), gt.back()));
  }
  return out;
}

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

/**
 * @brief One LSTM sequence, one sample, scalar loops.
 *
 * Weights are row-major [4H x D] and [4H x H]; gate rows are input, forget,
 * cell, output. Returns the last hidden state.
 */
inline std::vector<double> lstm_last_hidden(
  const std::vector<std::vector<double>> & xs, const std::vector<double> & w_ih,
  const std::vector<double> & w_hh, const std::vector<double> & bias, std::size_t hidden)
{
  const std::size_t d = xs.front().size();
  std::vector<double> h(hidden, 0.0);
  std::vector<double> c(hidden, 0.0);
  for (const auto & x : xs) {
    std::vector<double> z(4 * hidden);
    for (std::size_t r = 0; r < 4 * hidden; ++r) {
      double acc = bias[r];
      for (std::size_t j = 0; j < d; ++j) {
        acc += w_ih[r * d + j] * x[j];
      }
      for (std::size_t j = 0; j < hidden; ++j) {
        acc += w_hh[r * hidden + j] * h[j];
      }
      z[r] = acc;
    }
    for (std::size_t u = 0; u < hidden; ++u) {
      const double ig = sigmoid(z[u]);
      const double fg = sigmoid(z[hidden + u]);
      const double gg = std::tanh(z[2 * hidden + u]);
      const double og = sigmoid(z[3 * hidden + u]);
      c[u] = fg * c[u] + ig * gg;
      h[u] = og * std::tanh(c[u]);
    }
  }
  return h;
}

/// Scalar Adam with bias correction, one parameter.
struct ScalarAdam
{
  double lr;
  double b1{0.9};
  double b2{0.999};
  double eps{1e-8};
  double m{0.0};
  double v{0.0};
  int t{0};

  double step(double param, double grad)
  {
    ++t;
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad * grad;
    const double mh = m / (1.0 - std::pow(b1, t));
    const double vh = v / (1.0 - std::pow(b2, t));
    return param - lr * mh / (std::sqrt(vh) + eps);
  }
};

}  // namespace lanepred::testing::oracle

#endif  // LANEPRED__TESTS__SUPPORT__ORACLES_HPP_
