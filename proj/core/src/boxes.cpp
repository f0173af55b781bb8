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
#include "ldseg/boxes.hpp"

#include <algorithm>
#include <cmath>

#include "ldseg/errors.hpp"
#include "ldseg/rng.hpp"

namespace ldseg {

void BoxPrompt::validate(int image_h, int image_w) const {
  if (row0 < 0 || col0 < 0 || row1 >= image_h || col1 >= image_w)
    throw ValueError("box outside image bounds");
  if (row0 > row1 || col0 > col1) throw ValueError("box corners out of order");
}

BoxPrompt tight_box(const BinaryMask& gt) {
  BoxPrompt box;
  bool seen = false;
  for (Eigen::Index r = 0; r < gt.rows(); ++r) {
    for (Eigen::Index c = 0; c < gt.cols(); ++c) {
      if (!gt(r, c)) continue;
      if (!seen) {
        box.row0 = box.row1 = static_cast<int>(r);
        box.col0 = box.col1 = static_cast<int>(c);
        seen = true;
      } else {
        box.row0 = std::min(box.row0, static_cast<int>(r));
        box.row1 = std::max(box.row1, static_cast<int>(r));
        box.col0 = std::min(box.col0, static_cast<int>(c));
        box.col1 = std::max(box.col1, static_cast<int>(c));
      }
    }
  }
  if (!seen) throw ValueError("tight_box: empty mask");
  return box;
}

BoxPrompt loose_box(const BoxPrompt& box, int image_h, int image_w, double max_shift, std::uint64_t seed) {
  box.validate(image_h, image_w);
  if (max_shift < 0.0) throw ValueError("loose_box: max_shift must be >= 0");
  Rng rng(seed);
  const double sr = max_shift * box.height();
  const double sc = max_shift * box.width();
  // trunc keeps |displacement| strictly within the max_shift bound
  const auto draw = [&rng](double s) { return static_cast<int>(std::trunc(rng.uniform(-s, s))); };

  int r0 = box.row0 + draw(sr);
  int r1 = box.row1 + draw(sr);
  int c0 = box.col0 + draw(sc);
  int c1 = box.col1 + draw(sc);

  r0 = std::clamp(r0, 0, image_h - 1);
  r1 = std::clamp(r1, 0, image_h - 1);
  c0 = std::clamp(c0, 0, image_w - 1);
  c1 = std::clamp(c1, 0, image_w - 1);
  BoxPrompt out{std::min(r0, r1), std::min(c0, c1), std::max(r0, r1), std::max(c0, c1)};
  out.validate(image_h, image_w);
  return out;
}

std::pair<int, int> point_prompt(const BinaryMask& gt, std::uint64_t seed) {
  long long count = 0;
  for (Eigen::Index r = 0; r < gt.rows(); ++r)
    for (Eigen::Index c = 0; c < gt.cols(); ++c) count += gt(r, c) ? 1 : 0;
  if (count == 0) throw ValueError("point_prompt: empty mask");

  Rng rng(seed);
  long long target = static_cast<long long>(rng.uniform_index(static_cast<std::uint64_t>(count)));
  for (Eigen::Index r = 0; r < gt.rows(); ++r)
    for (Eigen::Index c = 0; c < gt.cols(); ++c)
      if (gt(r, c) && target-- == 0) return {static_cast<int>(r), static_cast<int>(c)};
  throw Error("point_prompt: unreachable");
}

BinaryMask box_fill(const BoxPrompt& box, int image_h, int image_w) {
  box.validate(image_h, image_w);
  BinaryMask out = BinaryMask::Zero(image_h, image_w);
  for (int r = box.row0; r <= box.row1; ++r)
    for (int c = box.col0; c <= box.col1; ++c) out(r, c) = 1;
  return out;
}

} // namespace ldseg
