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
#include "ldseg/metrics.hpp"

#include "ldseg/errors.hpp"

namespace ldseg {

double dsc(const BinaryMask& pred, const BinaryMask& gt, const DscOptions& options) {
  if (pred.rows() != gt.rows() || pred.cols() != gt.cols())
    throw DimensionError("dsc: prediction and ground truth shapes differ");

  long long tp = 0, fp = 0, fn = 0;
  for (Eigen::Index r = 0; r < pred.rows(); ++r) {
    for (Eigen::Index c = 0; c < pred.cols(); ++c) {
      const std::uint8_t p = pred(r, c);
      const std::uint8_t g = gt(r, c);
      if (p > 1 || g > 1) throw ValueError("dsc: masks must be binary");
      tp += (p == 1 && g == 1);
      fp += (p == 1 && g == 0);
      fn += (p == 0 && g == 1);
    }
  }
  const long long denom = 2 * tp + fp + fn;
  if (denom == 0) return options.both_empty;
  return static_cast<double>(2 * tp) / static_cast<double>(denom);
}

} // namespace ldseg
