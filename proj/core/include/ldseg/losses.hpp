/*
 * Copyright 2026 The ldseg authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include "ldseg/autograd.hpp"

namespace ldseg {

struct LossWeights {
  float w_text = 1.0f;
  float w_bce = 1.0f;
  float w_dice = 1.0f;
  float dice_smooth = 1e-5f;

  void validate() const;
};

/// Soft overlap loss: 1 - (2*sum(p*g) + eps) / (sum(p) + sum(g) + eps).
/// probs must lie in [0, 1] and gt in {0, 1}; shapes must match.
ag::Var dice_loss(ag::Var probs, ag::Var gt, float eps = 1e-5f);

/// Mean per-pixel binary cross entropy; probabilities are clamped to
/// [delta, 1 - delta] before the logs.
ag::Var bce_loss(ag::Var probs, ag::Var gt, float delta = 1e-7f);

/// w_text * text + w_bce * bce + w_dice * dice. Throws NumericError when a
/// component is non-finite.
ag::Var total_loss(ag::Var text, ag::Var bce, ag::Var dice, const LossWeights& weights);

} // namespace ldseg
