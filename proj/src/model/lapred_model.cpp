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

#include "lanepred/model/lapred_model.hpp"

#include <stdexcept>
#include <string>

#include "lanepred/nn/ops.hpp"

namespace lanepred::model
{

TrajectoryEncoder TrajectoryEncoder::create(std::size_t conv, std::size_t hidden, nn::Rng & rng)
{
  TrajectoryEncoder e;
  e.conv1 = nn::Conv1dLayer::create(2, conv, 2, 1, 0, rng);
  e.conv2 = nn::Conv1dLayer::create(conv, conv, 2, 1, 0, rng);
  e.lstm = nn::LstmLayer::create(conv, hidden, rng);
  return e;
}

nn::Tensor TrajectoryEncoder::forward(const nn::Tensor & x) const
{
  const auto a = nn::relu(conv1.forward(x));
  const auto b = nn::relu(conv2.forward(a));
  return lstm.forward(b);
}

void TrajectoryEncoder::collect(const std::string & prefix, nn::NamedParams & out) const
{
  conv1.collect(prefix + ".conv1", out);
  conv2.collect(prefix + ".conv2", out);
  lstm.collect(prefix + ".lstm", out);
}

LaneEncoder LaneEncoder::create(
  std::size_t conv, std::size_t wide, std::size_t hidden, nn::Rng & rng)
{
  LaneEncoder e;
  e.convs.push_back(nn::Conv1dLayer::create(2, conv, 3, 1, 1, rng));
  e.convs.push_back(nn::Conv1dLayer::create(conv, conv, 3, 1, 1, rng));
  e.convs.push_back(nn::Conv1dLayer::create(conv, wide, 3, 1, 1, rng));
  e.convs.push_back(nn::Conv1dLayer::create(wide, wide, 3, 1, 1, rng));
  e.lstm = nn::LstmLayer::create(wide, hidden, rng);
  return e;
}

nn::Tensor LaneEncoder::forward(const nn::Tensor & x) const
{
  nn::Tensor y = x;
  for (const auto & c : convs) {
    y = nn::relu(c.forward(y));
  }
  return lstm.forward(y);
}

void LaneEncoder::collect(const std::string & prefix, nn::NamedParams & out) const
{
  for (std::size_t i = 0; i < convs.size(); ++i) {
    convs[i].collect(prefix + ".conv" + std::to_string(i + 1), out);
  }
  lstm.collect(prefix + ".lstm", out);
}

Mlp Mlp::create(
  std::size_t in, const std::vector<std::size_t> & widths, bool relu_last, nn::Rng & rng)
{
  Mlp m;
  m.relu_last = relu_last;
  for (const auto w : widths) {
    m.layers.push_back(nn::LinearLayer::create(in, w, rng));
    in = w;
  }
  return m;
}

nn::Tensor Mlp::forward(const nn::Tensor & x) const
{
  nn::Tensor y = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    y = layers[i].forward(y);
    if (relu_last || i + 1 < layers.size()) {
      y = nn::relu(y);
    }
  }
  return y;
}

void Mlp::collect(const std::string & prefix, nn::NamedParams & out) const
{
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].collect(prefix + ".fc" + std::to_string(i + 1), out);
  }
}

LaPredModel::LaPredModel(const ModelConfig & cfg, std::uint64_t seed)
: cfg_(cfg), dims_(cfg.dims())
{
  cfg_.validate();
  nn::Rng rng(seed);
  const auto & d = dims_;
  const std::size_t N = static_cast<std::size_t>(cfg_.num_lanes);
  const std::size_t K = static_cast<std::size_t>(cfg_.num_modes);
  const std::size_t h = static_cast<std::size_t>(cfg_.future_len);

  past_enc_ = TrajectoryEncoder::create(d.traj_conv, d.traj_lstm, rng);
  lane_enc_ = LaneEncoder::create(d.lane_conv, d.lane_conv_wide, d.lane_lstm, rng);
  agent_enc_ = TrajectoryEncoder::create(d.traj_conv, d.traj_lstm, rng);
  tfe_fc_ = Mlp::create(d.tfe_concat(), d.tfe_fc, true, rng);

  auto la_widths = d.la_fc;
  la_widths.push_back(N);
  la_ = Mlp::create(d.feature() * N, la_widths, false, rng);

  for (std::size_t k = 0; k < K; ++k) {
    heads_.push_back(Mlp::create(d.mtp_input(), d.mtp_head, true, rng));
  }
  auto trunk_widths = d.mtp_shared;
  trunk_widths.push_back(2 * h);
  trunk_ = Mlp::create(d.mtp_head.back(), trunk_widths, false, rng);
}

nn::NamedParams LaPredModel::parameters() const
{
  nn::NamedParams out;
  past_enc_.collect("tfe.past", out);
  lane_enc_.collect("tfe.lane", out);
  agent_enc_.collect("tfe.agent", out);
  tfe_fc_.collect("tfe.joint", out);
  la_.collect("la", out);
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    heads_[k].collect("mtp.head" + std::to_string(k), out);
  }
  trunk_.collect("mtp.shared", out);
  return out;
}

std::vector<nn::Tensor> LaPredModel::parameter_tensors() const
{
  std::vector<nn::Tensor> out;
  for (const auto & [name, t] : parameters()) {
    out.push_back(t);
  }
  return out;
}

LaneFeatures LaPredModel::tfe_forward(const Batch & batch) const
{
  const std::size_t B = batch.size;
  const std::size_t N = batch.num_lanes;
  if (N != static_cast<std::size_t>(cfg_.num_lanes)) {
    throw std::invalid_argument("batch lane count does not match the model");
  }
  LaneFeatures f;
  f.xi_vp = past_enc_.forward(batch.past);
  f.xi_li = lane_enc_.forward(batch.lanes);
  f.xi_vi = nn::max_pool_groups(agent_enc_.forward(batch.agents), batch.agent_groups);

  std::vector<std::size_t> owner(B * N);
  for (std::size_t r = 0; r < owner.size(); ++r) {
    owner[r] = r / N;
  }
  const auto vp_rows = nn::take_rows(f.xi_vp, owner);
  const auto joint = tfe_fc_.forward(nn::concat({vp_rows, f.xi_li, f.xi_vi}));
  f.xi = nn::reshape(joint, {B, N, dims_.feature()});
  return f;
}

nn::Tensor LaPredModel::la_forward(const nn::Tensor & xi, const Batch & batch) const
{
  const std::size_t B = xi.dim(0);
  const std::size_t N = xi.dim(1);
  nn::Tensor logits = la_.forward(nn::reshape(xi, {B, N * xi.dim(2)}));
  if (cfg_.mask_invalid_lanes) {
    std::vector<double> mask(B * N, 0.0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      mask[i] = batch.lane_valid[i] ? 0.0 : -1e9;
    }
    logits = nn::add(logits, nn::Tensor::from_data({B, N}, std::move(mask)));
  }
  return nn::softmax(logits);
}

nn::Tensor LaPredModel::aggregate(const nn::Tensor & xi, const nn::Tensor & weights) const
{
  if (cfg_.selection == SelectionMode::kSoft) {
    return nn::weighted_sum(xi, weights);
  }
  const std::size_t B = xi.dim(0);
  const std::size_t N = xi.dim(1);
  const auto w = weights.data();
  std::vector<std::size_t> rows(B);
  for (std::size_t b = 0; b < B; ++b) {
    std::size_t best = 0;
    for (std::size_t n = 1; n < N; ++n) {
      if (w[b * N + n] > w[b * N + best]) {
        best = n;
      }
    }
    rows[b] = b * N + best;
  }
  return nn::take_rows(nn::reshape(xi, {B * N, xi.dim(2)}), rows);
}

nn::Tensor LaPredModel::mtp_forward(const nn::Tensor & xi, const nn::Tensor & xi_vp) const
{
  const std::size_t B = xi.dim(0);
  const std::size_t K = heads_.size();
  const std::size_t h = static_cast<std::size_t>(cfg_.future_len);
  const auto in = nn::concat({xi, xi_vp});
  std::vector<nn::Tensor> per_head;
  per_head.reserve(K);
  for (const auto & head : heads_) {
    per_head.push_back(head.forward(in));
  }
  const std::size_t width = per_head.front().dim(-1);
  const auto stacked = nn::reshape(nn::concat(per_head), {B * K, width});
  auto out = nn::reshape(trunk_.forward(stacked), {B, K, h, 2});
  if (cfg_.input_scale != 1.0) {
    out = nn::scale(out, 1.0 / cfg_.input_scale);
  }
  return out;
}

ForwardResult LaPredModel::forward(const Batch & batch) const
{
  ForwardResult r;
  r.features = tfe_forward(batch);
  r.lane_weights = la_forward(r.features.xi, batch);
  r.aggregated = aggregate(r.features.xi, r.lane_weights);
  r.trajectories = mtp_forward(r.aggregated, r.features.xi_vp);
  return r;
}

std::vector<PredictionOutput> unpack(const ForwardResult & r)
{
  const std::size_t B = r.trajectories.dim(0);
  const std::size_t K = r.trajectories.dim(1);
  const std::size_t h = r.trajectories.dim(2);
  const std::size_t N = r.lane_weights.dim(1);
  const std::size_t F = r.aggregated.dim(1);
  const auto t = r.trajectories.data();
  const auto w = r.lane_weights.data();
  const auto a = r.aggregated.data();
  std::vector<PredictionOutput> out(B);
  for (std::size_t b = 0; b < B; ++b) {
    auto & o = out[b];
    o.trajectories.assign(K, std::vector<geom::Point2>(h));
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < h; ++i) {
        const std::size_t base = ((b * K + k) * h + i) * 2;
        o.trajectories[k][i] = {t[base], t[base + 1]};
      }
    }
    o.lane_weights.assign(w.begin() + static_cast<std::ptrdiff_t>(b * N),
      w.begin() + static_cast<std::ptrdiff_t>((b + 1) * N));
    o.aggregated_xi.assign(a.begin() + static_cast<std::ptrdiff_t>(b * F),
      a.begin() + static_cast<std::ptrdiff_t>((b + 1) * F));
  }
  return out;
}

PredictionOutput predict(const LaPredModel & model, const scenario::PredictionInstance & inst)
{
  nn::NoGradGuard no_grad;
  return unpack(model.forward(make_batch(inst, model.config()))).front();
}

}  // namespace lanepred::model
