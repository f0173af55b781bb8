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

#include "ldseg/types.hpp"

namespace ldseg {

struct DscOptions {
  double both_empty = 1.0; // value when prediction and truth are both empty
};

/// Dice similarity coefficient 2TP / (2TP + FP + FN) over binary masks.
/// Throws DimensionError on shape mismatch, ValueError on non-binary input.
double dsc(const BinaryMask& pred, const BinaryMask& gt, const DscOptions& options = {});

} // namespace ldseg
