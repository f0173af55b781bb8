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
#include "ldseg/regions.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>

#include "ldseg/errors.hpp"

namespace ldseg {
namespace {

constexpr const char* kEmptySentence = "The image contains no highlighted regions.";

constexpr const char* kCellNames[3][3] = {
    {"top-left", "top-center", "top-right"},
    {"middle-left", "center", "middle-right"},
    {"bottom-left", "bottom-center", "bottom-right"},
};

int band(double coord, int extent) {
  int b = static_cast<int>(3.0 * coord / extent);
  return std::clamp(b, 0, 2);
}

struct LabelStats {
  long long count = 0;
  double sum_r = 0.0;
  double sum_c = 0.0;
  int r0 = 0, c0 = 0, r1 = 0, c1 = 0;
  bool seen = false;
};

int count_components(const LabelMap& labels, std::int32_t label) {
  const int h = static_cast<int>(labels.rows());
  const int w = static_cast<int>(labels.cols());
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(h) * w, 0);
  int components = 0;
  std::deque<std::pair<int, int>> queue;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      if (labels(i, j) != label || visited[static_cast<std::size_t>(i) * w + j]) continue;
      ++components;
      visited[static_cast<std::size_t>(i) * w + j] = 1;
      queue.emplace_back(i, j);
      while (!queue.empty()) {
        auto [r, c] = queue.front();
        queue.pop_front();
        constexpr int dr[4] = {-1, 1, 0, 0};
        constexpr int dc[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
          const int nr = r + dr[k];
          const int nc = c + dc[k];
          if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
          if (labels(nr, nc) != label || visited[static_cast<std::size_t>(nr) * w + nc]) continue;
          visited[static_cast<std::size_t>(nr) * w + nc] = 1;
          queue.emplace_back(nr, nc);
        }
      }
    }
  }
  return components;
}

std::string shape_adjective(const RegionDescriptor& d, const DescribeThresholds& t) {
  if (d.compactness >= t.blocky_compactness) return "blocky";
  if (d.elongation >= t.elongated_ratio) return "elongated";
  return "irregular";
}

} // namespace

std::string cell_name(double centroid_row, double centroid_col, int height, int width) {
  return kCellNames[band(centroid_row, height)][band(centroid_col, width)];
}

std::vector<RegionDescriptor> region_descriptors(const SegMask& mask) {
  std::map<std::int32_t, LabelStats> stats;
  for (int i = 0; i < mask.labels.rows(); ++i) {
    for (int j = 0; j < mask.labels.cols(); ++j) {
      const std::int32_t l = mask.labels(i, j);
      if (l == 0) continue;
      auto& s = stats[l];
      if (!s.seen) {
        s.r0 = s.r1 = i;
        s.c0 = s.c1 = j;
        s.seen = true;
      }
      s.count += 1;
      s.sum_r += i;
      s.sum_c += j;
      s.r0 = std::min(s.r0, i);
      s.r1 = std::max(s.r1, i);
      s.c0 = std::min(s.c0, j);
      s.c1 = std::max(s.c1, j);
    }
  }

  std::vector<RegionDescriptor> out;
  const double total = static_cast<double>(mask.labels.rows()) * static_cast<double>(mask.labels.cols());
  for (const auto& [label, s] : stats) {
    RegionDescriptor d;
    d.label = label;
    auto it = mask.categories.find(label);
    d.category = it != mask.categories.end() ? it->second : "label_" + std::to_string(label);
    d.area_fraction = static_cast<double>(s.count) / total;
    const double cr = s.sum_r / static_cast<double>(s.count);
    const double cc = s.sum_c / static_cast<double>(s.count);
    d.centroid_cell = cell_name(cr, cc, static_cast<int>(mask.labels.rows()), static_cast<int>(mask.labels.cols()));
    d.bbox = {s.r0, s.c0, s.r1, s.c1};
    const double side_r = s.r1 - s.r0 + 1;
    const double side_c = s.c1 - s.c0 + 1;
    d.elongation = std::max(side_r, side_c) / std::min(side_r, side_c);
    d.compactness = static_cast<double>(s.count) / (side_r * side_c);
    d.component_count = count_components(mask.labels, label);
    out.push_back(std::move(d));
  }
  return out;
}

std::pair<std::string, std::vector<RegionDescriptor>> describe_regions(const SegMask& mask,
                                                                       const ColorPalette& palette,
                                                                       const DescribeThresholds& thresholds) {
  std::vector<RegionDescriptor> descriptors = region_descriptors(mask);
  if (descriptors.empty()) return {kEmptySentence, {}};

  std::string text;
  for (const auto& d : descriptors) {
    const std::string color =
        palette.has(d.label) ? color_name(palette.color(d.label)) : "label-" + std::to_string(d.label);
    char pct[16];
    std::snprintf(pct, sizeof(pct), "%.1f", d.area_fraction * 100.0);
    char parts[64];
    if (d.component_count == 1)
      std::snprintf(parts, sizeof(parts), "a single part");
    else
      std::snprintf(parts, sizeof(parts), "%d separate parts", d.component_count);
    if (!text.empty()) text += " ";
    text += "The " + color + " region (" + d.category + ") is " + shape_adjective(d, thresholds) + ", covers " +
            pct + "% of the image as " + parts + ", and lies in the " + d.centroid_cell + ".";
  }
  return {text, std::move(descriptors)};
}

std::pair<std::string, std::vector<RegionDescriptor>> describe_regions(const SegMask& mask) {
  std::int32_t max_label = 0;
  for (const auto& [label, _] : mask.categories) max_label = std::max(max_label, label);
  const std::size_t capacity = default_palette_capacity();
  const std::size_t n = std::min<std::size_t>(capacity, static_cast<std::size_t>(std::max(max_label, 0)));
  return describe_regions(mask, default_palette(n));
}

} // namespace ldseg
