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
#include <string>
#include <utility>
#include <vector>

#include "ldseg/palette.hpp"
#include "ldseg/types.hpp"

namespace ldseg {

/// Geometry summary of one labeled region (all connected components of a
/// label taken together).
struct RegionDescriptor {
  std::int32_t label = 0;
  std::string category;
  double area_fraction = 0.0;      // foreground pixels / (H*W), in (0, 1]
  std::string centroid_cell;       // one of the 9 named 3x3 grid cells
  std::array<int, 4> bbox{0, 0, 0, 0}; // row0, col0, row1, col1 inclusive
  double elongation = 1.0;         // bbox long side / short side, >= 1
  double compactness = 1.0;        // area / bbox area, in (0, 1]
  int component_count = 1;         // 4-connectivity
};

/// Shape-adjective thresholds for the sentence templates.
struct DescribeThresholds {
  double blocky_compactness = 0.75;
  double elongated_ratio = 3.0;
};

/// Name of the 3x3 grid cell holding a centroid.
std::string cell_name(double centroid_row, double centroid_col, int height, int width);

/// Computes descriptors for every label present in the mask, ascending by
/// label id. Centroid is the mean of foreground coordinates per label;
/// components use 4-connectivity.
std::vector<RegionDescriptor> region_descriptors(const SegMask& mask);

/// Deterministic region describer. Empty masks yield the fixed sentence
/// "The image contains no highlighted regions."; otherwise one templated
/// sentence per category, in ascending label order. Colors are named from
/// the palette (default palette when omitted).
std::pair<std::string, std::vector<RegionDescriptor>> describe_regions(
    const SegMask& mask, const ColorPalette& palette, const DescribeThresholds& thresholds = {});

std::pair<std::string, std::vector<RegionDescriptor>> describe_regions(const SegMask& mask);

} // namespace ldseg
