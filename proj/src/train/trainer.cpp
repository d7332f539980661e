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

#include "lanepred/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "lanepred/eval/metrics.hpp"
#include "lanepred/nn/adam.hpp"
#include "lanepred/train/checkpoint.hpp"
#include "lanepred/train/plateau_scheduler.hpp"

namespace lanepred::train
{

void TrainConfig::validate() const
{
  if (batch_size < 1) {
    throw std::invalid_argument("batch_size must be >= 1");
  }
  if (!(lr > 0.0)) {
    throw std::invalid_argument("lr must be positive");
  }
  if (plateau_patience < 1) {
    throw std::invalid_argument("plateau_patience must be >= 1");
  }
  if (!(lr_decay > 0.0 && lr_decay < 1.0)) {
    throw std::invalid_argument("lr_decay must lie in (0, 1)");
  }
  if (max_epochs < 0) {
    throw std::invalid_argument("max_epochs must be >= 0");
  }
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("val_fraction must lie in [0, 1)");
  }
}

namespace
{

void accumulate(LossComponents & acc, const LossComponents & c, double w)
{
  acc.pos += w * c.pos;
  acc.lane_off += w * c.lane_off;
  acc.cls += w * c.cls;
  acc.pred += w * c.pred;
  acc.total += w * c.total;
}

void divide(LossComponents & acc, double n)
{
  acc.pos /= n;
  acc.lane_off /= n;
  acc.cls /= n;
  acc.pred /= n;
  acc.total /= n;
}

std::vector<const scenario::PredictionInstance *> slice(
  const std::vector<scenario::PredictionInstance> & data, const std::vector<std::size_t> & order,
  std::size_t start, std::size_t count)
{
  std::vector<const scenario::PredictionInstance *> out;
  for (std::size_t i = start; i < std::min(order.size(), start + count); ++i) {
    out.push_back(&data[order[i]]);
  }
  return out;
}

}  // namespace

LossComponents evaluate_loss(
  const model::LaPredModel & model, const std::vector<scenario::PredictionInstance> & data,
  const LossConfig & cfg, std::size_t batch_size)
{
  nn::NoGradGuard no_grad;
  LossComponents acc;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t start = 0; start < data.size(); start += batch_size) {
    const auto ptrs = slice(data, order, start, batch_size);
    const auto batch = model::make_batch(ptrs, model.config());
    const auto r = loss_total(model.forward(batch), batch, cfg);
    accumulate(acc, r.components, static_cast<double>(ptrs.size()));
  }
  if (!data.empty()) {
    divide(acc, static_cast<double>(data.size()));
  }
  return acc;
}

std::pair<std::vector<scenario::PredictionInstance>, std::vector<scenario::PredictionInstance>>
split_train_val(
  const std::vector<scenario::PredictionInstance> & data, double fraction, std::uint64_t seed)
{
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_val = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(data.size())));
  std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::pair<std::vector<scenario::PredictionInstance>, std::vector<scenario::PredictionInstance>> out;
  for (const auto i : train_idx) {
    out.first.push_back(data[i]);
  }
  for (const auto i : val_idx) {
    out.second.push_back(data[i]);
  }
  return out;
}

TrainReport train_loop(
  model::LaPredModel & model, const std::vector<scenario::PredictionInstance> & train_set,
  const std::vector<scenario::PredictionInstance> & val_set, const LossConfig & loss_cfg,
  const TrainConfig & cfg, const TrainHooks & hooks)
{
  cfg.validate();
  loss_cfg.validate();
  if (train_set.empty()) {
    throw std::invalid_argument("training set is empty");
  }
  for (const auto & inst : train_set) {
    model::check_instance(inst, model.config());
  }
  for (const auto & inst : val_set) {
    model::check_instance(inst, model.config());
  }

  const bool write = !hooks.checkpoint_dir.empty();
  auto checkpoint = [&](const char * name, int epoch) {
    if (write) {
      auto meta = hooks.checkpoint_metadata;
      meta["epoch"] = epoch;
      meta["name"] = name;
      save_checkpoint(hooks.checkpoint_dir / name, model, meta);
    }
  };
  checkpoint("initial", 0);

  TrainReport report;
  nn::Adam adam(model.parameter_tensors(), nn::AdamConfig{cfg.lr});
  PlateauScheduler scheduler(cfg.lr, cfg.plateau_patience, cfg.lr_decay);
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t B = static_cast<std::size_t>(cfg.batch_size);
  const int K = model.config().num_modes;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = scheduler.lr();
    adam.set_lr(scheduler.lr());
    std::shuffle(order.begin(), order.end(), rng);

    std::size_t batch_id = 0;
    for (std::size_t start = 0; start < order.size(); start += B, ++batch_id) {
      const auto ptrs = slice(train_set, order, start, B);
      const auto batch = model::make_batch(ptrs, model.config());
      const auto r = loss_total(model.forward(batch), batch, loss_cfg);
      if (!std::isfinite(r.components.total)) {
        throw DivergenceError(epoch, batch_id);
      }
      r.total.backward();
      adam.step();
      accumulate(rec.train, r.components, static_cast<double>(ptrs.size()));
    }
    divide(rec.train, static_cast<double>(train_set.size()));

    double monitored = rec.train.total;
    if (!val_set.empty()) {
      rec.has_val = true;
      rec.val = evaluate_loss(model, val_set, loss_cfg, B);
      const auto m = eval::evaluate_dataset(model, val_set, {K}, B);
      rec.val_ade = m.rows.front().ade;
      rec.val_fde = m.rows.front().fde;
      monitored = rec.val.total;
    }
    if (monitored < report.best_loss) {
      report.best_loss = monitored;
      report.best_epoch = epoch;
      checkpoint("best", epoch);
    }
    scheduler.step(monitored);
    rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.epochs.push_back(rec);
    if (hooks.on_epoch) {
      hooks.on_epoch(rec);
    }
  }
  report.lr_decays = scheduler.decays();
  if (cfg.max_epochs > 0) {
    checkpoint("final", cfg.max_epochs);
  }
  return report;
}

}  // namespace lanepred::train
