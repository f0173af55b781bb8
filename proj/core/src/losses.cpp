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
#include "ldseg/losses.hpp"

#include <cmath>

#include "ldseg/errors.hpp"

namespace ldseg {
namespace {

void check_mask_pair(const ag::Var& probs, const ag::Var& gt) {
  if (probs->val.rows() != gt->val.rows() || probs->val.cols() != gt->val.cols())
    throw DimensionError("loss: probability/target shape mismatch");
  if ((probs->val.array() < 0.0f).any() || (probs->val.array() > 1.0f).any())
    throw ValueError("loss: probabilities outside [0, 1]");
  if (((gt->val.array() != 0.0f) && (gt->val.array() != 1.0f)).any())
    throw ValueError("loss: targets must be binary");
}

} // namespace

void LossWeights::validate() const {
  if (w_text < 0.0f || w_bce < 0.0f || w_dice < 0.0f) throw ValueError("loss weights must be non-negative");
  if (w_text + w_bce + w_dice <= 0.0f) throw ValueError("at least one loss weight must be positive");
  if (dice_smooth <= 0.0f) throw ValueError("dice smoothing must be positive");
}

ag::Var dice_loss(ag::Var probs, ag::Var gt, float eps) {
  check_mask_pair(probs, gt);
  ag::Var inter = ag::sum_all(ag::hadamard(probs, gt));
  ag::Var denom = ag::shift(ag::add(ag::sum_all(probs), ag::sum_all(gt)), eps);
  ag::Var num = ag::shift(ag::scale(inter, 2.0f), eps);
  return ag::shift(ag::scale(ag::div(num, denom), -1.0f), 1.0f);
}

ag::Var bce_loss(ag::Var probs, ag::Var gt, float delta) {
  check_mask_pair(probs, gt);
  ag::Var p = ag::clamp(probs, delta, 1.0f - delta);
  ag::Var q = ag::clamp(ag::shift(ag::scale(probs, -1.0f), 1.0f), delta, 1.0f - delta); // 1 - p
  ag::Var ones_minus_g = ag::shift(ag::scale(gt, -1.0f), 1.0f);
  ag::Var ll = ag::add(ag::hadamard(gt, ag::log_op(p)), ag::hadamard(ones_minus_g, ag::log_op(q)));
  return ag::scale(ag::mean_all(ll), -1.0f);
}

ag::Var total_loss(ag::Var text, ag::Var bce, ag::Var dice, const LossWeights& weights) {
  weights.validate();
  for (const auto& [name, v] :
       {std::pair<const char*, const ag::Var&>{"text", text}, {"bce", bce}, {"dice", dice}}) {
    if (v->val.size() != 1) throw DimensionError(std::string("total_loss: ") + name + " must be scalar");
    if (!std::isfinite(v->val(0, 0)))
      throw NumericError(std::string("total_loss: non-finite ") + name + " component");
  }
  return ag::add(ag::add(ag::scale(text, weights.w_text), ag::scale(bce, weights.w_bce)),
                 ag::scale(dice, weights.w_dice));
}

} // namespace ldseg
