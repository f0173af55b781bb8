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

#include <cstdint>
#include <utility>

#include "ldseg/types.hpp"

namespace ldseg {

/// Inclusive rectangle in pixel coordinates.
struct BoxPrompt {
  int row0 = 0;
  int col0 = 0;
  int row1 = 0;
  int col1 = 0;

  int height() const { return row1 - row0 + 1; }
  int width() const { return col1 - col0 + 1; }
  void validate(int image_h, int image_w) const;
};

/// The exact bounding rectangle of the foreground. Throws ValueError on an
/// empty mask.
BoxPrompt tight_box(const BinaryMask& gt);

/// Randomly displaces each edge independently by up to max_shift of the
/// box's extent along that axis (displacement truncated toward zero so the
/// bound is strict), then clamps to image bounds and reorders. Deterministic
/// per seed.
BoxPrompt loose_box(const BoxPrompt& box, int image_h, int image_w, double max_shift, std::uint64_t seed);

/// A uniformly drawn foreground pixel (row, col). Deterministic per seed;
/// throws ValueError on an empty mask.
std::pair<int, int> point_prompt(const BinaryMask& gt, std::uint64_t seed);

/// Filled-rectangle mask; the crudest box-prompt baseline prediction.
BinaryMask box_fill(const BoxPrompt& box, int image_h, int image_w);

} // namespace ldseg
