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

#include "lanepred/train/plateau_scheduler.hpp"

#include <stdexcept>

namespace lanepred::train
{

PlateauScheduler::PlateauScheduler(double initial_lr, int patience, double factor)
: lr_(initial_lr), patience_(patience), factor_(factor)
{
  if (!(initial_lr > 0.0)) {
    throw std::invalid_argument("initial learning rate must be positive");
  }
  if (patience < 1) {
    throw std::invalid_argument("plateau patience must be >= 1");
  }
  if (!(factor > 0.0 && factor < 1.0)) {
    throw std::invalid_argument("decay factor must lie in (0, 1)");
  }
}

bool PlateauScheduler::step(double val_loss)
{
  if (val_loss < best_) {
    best_ = val_loss;
    bad_ = 0;
    return false;
  }
  if (++bad_ < patience_) {
    return false;
  }
  lr_ *= factor_;
  bad_ = 0;
  ++decays_;
  return true;
}

}  // namespace lanepred::train
