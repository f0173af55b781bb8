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
#include "ldseg/palette.hpp"

#include <array>
#include <cstdio>
#include <set>

#include "ldseg/errors.hpp"

namespace ldseg {
namespace {

// 20 visually well-separated colors; order fixes the label assignment.
struct NamedColor {
  Rgb rgb;
  const char* name;
};

constexpr std::array<NamedColor, 20> kDefaultColors{{
    {{230, 25, 75}, "red"},       {{60, 180, 75}, "green"},    {{255, 225, 25}, "yellow"},
    {{0, 130, 200}, "blue"},      {{245, 130, 48}, "orange"},  {{145, 30, 180}, "purple"},
    {{70, 240, 240}, "cyan"},     {{240, 50, 230}, "magenta"}, {{210, 245, 60}, "lime"},
    {{250, 190, 212}, "pink"},    {{0, 128, 128}, "teal"},     {{220, 190, 255}, "lavender"},
    {{154, 99, 36}, "brown"},     {{255, 250, 200}, "beige"},  {{128, 0, 0}, "maroon"},
    {{170, 255, 195}, "mint"},    {{128, 128, 0}, "olive"},    {{255, 216, 177}, "apricot"},
    {{0, 0, 117}, "navy"},        {{169, 169, 169}, "grey"},
}};

} // namespace

ColorPalette::ColorPalette(Rgb background, std::map<std::int32_t, Rgb> entries)
    : background_(background), entries_(std::move(entries)) {
  std::set<Rgb> seen{background_};
  for (const auto& [label, color] : entries_) {
    if (label <= 0) throw ValueError("palette labels must be positive");
    if (!seen.insert(color).second) throw ValueError("palette colors must be pairwise distinct");
  }
}

Rgb ColorPalette::color(std::int32_t label) const {
  auto it = entries_.find(label);
  if (it == entries_.end()) throw ValueError("label " + std::to_string(label) + " missing from palette");
  return it->second;
}

std::int32_t ColorPalette::label_of(Rgb color) const {
  if (color == background_) return 0;
  for (const auto& [label, c] : entries_)
    if (c == color) return label;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", color[0], color[1], color[2]);
  throw ValueError(std::string("color ") + buf + " not in palette");
}

std::vector<Rgb> ColorPalette::as_index_table() const {
  std::int32_t max_label = 0;
  for (const auto& [label, _] : entries_) max_label = std::max(max_label, label);
  std::vector<Rgb> table(static_cast<std::size_t>(max_label) + 1, background_);
  for (const auto& [label, color] : entries_) table[static_cast<std::size_t>(label)] = color;
  return table;
}

ColorPalette default_palette(std::size_t n_labels) {
  if (n_labels > kDefaultColors.size())
    throw ValueError("default palette holds " + std::to_string(kDefaultColors.size()) + " colors, requested " +
                     std::to_string(n_labels));
  std::map<std::int32_t, Rgb> entries;
  for (std::size_t i = 0; i < n_labels; ++i) entries[static_cast<std::int32_t>(i) + 1] = kDefaultColors[i].rgb;
  return ColorPalette({0, 0, 0}, std::move(entries));
}

std::string color_name(Rgb color) {
  for (const auto& nc : kDefaultColors)
    if (nc.rgb == color) return nc.name;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", color[0], color[1], color[2]);
  return buf;
}

std::size_t default_palette_capacity() { return kDefaultColors.size(); }

} // namespace ldseg
