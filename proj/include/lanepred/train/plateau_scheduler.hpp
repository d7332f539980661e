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

#ifndef LANEPRED__TRAIN__PLATEAU_SCHEDULER_HPP_
#define LANEPRED__TRAIN__PLATEAU_SCHEDULER_HPP_

#include <limits>

namespace lanepred::train
{

/**
 * @brief Multiplies the learning rate by a factor when validation stops improving.
 *
 * An epoch improves when its loss is strictly below the best so far. After
 * `patience` consecutive non-improving epochs the rate decays at the end of
 * the epoch that completes the streak, and the streak restarts.
 */
class PlateauScheduler
{
public:
  PlateauScheduler(double initial_lr, int patience, double factor);

  /// Records one epoch; returns true if the rate decayed.
  bool step(double val_loss);

  double lr() const { return lr_; }
  double best() const { return best_; }
  int bad_epochs() const { return bad_; }
  int decays() const { return decays_; }

private:
  double lr_;
  int patience_;
  double factor_;
  double best_{std::numeric_limits<double>::infinity()};
  int bad_{0};
  int decays_{0};
};

}  // namespace lanepred::train

#endif  // LANEPRED__TRAIN__PLATEAU_SCHEDULER_HPP_
