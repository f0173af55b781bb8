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

#include <array>
#include <cstdint>

#include "ldseg/types.hpp"

namespace ldseg {

struct SplitRatios {
  double train = 0.8;
  double tune = 0.1;
  double validation = 0.1;
};

/// Apportions `total` scans to the three buckets by floor-then-largest-
/// remainder rounding; exposes the arithmetic for direct testing.
std::array<std::size_t, 3> apportion(std::size_t total, const SplitRatios& ratios);

/// Assigns splits scan-wise: every record sharing a scan_id lands in the
/// same split. Pure function of (sorted scan ids, ratios, seed).
/// Throws ValueError on bad ratios or when there are fewer distinct scans
/// than nonzero ratio buckets.
DatasetManifest grouped_split(const DatasetManifest& manifest, const SplitRatios& ratios, std::uint64_t seed);

} // namespace ldseg
