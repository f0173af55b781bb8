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
#include <map>
#include <string>
#include <vector>

#include "ldseg/types.hpp"

namespace ldseg {

/// Injective label -> color assignment. Background plus all entries are
/// pairwise distinct; iteration order is ascending label id.
class ColorPalette {
public:
  ColorPalette() = default;
  ColorPalette(Rgb background, std::map<std::int32_t, Rgb> entries);

  Rgb background() const { return background_; }
  const std::map<std::int32_t, Rgb>& entries() const { return entries_; }

  bool has(std::int32_t label) const { return entries_.count(label) > 0; }
  Rgb color(std::int32_t label) const;

  /// Label for a color; background maps to 0. Throws ValueError for colors
  /// outside the palette.
  std::int32_t label_of(Rgb color) const;

  /// Dense index->color table (index = label id) for indexed PNG output.
  std::vector<Rgb> as_index_table() const;

private:
  Rgb background_{0, 0, 0};
  std::map<std::int32_t, Rgb> entries_;
};

/// The fixed 20-entry high-contrast palette, assigned by ascending label id
/// starting at 1; background is black.
ColorPalette default_palette(std::size_t n_labels);

/// Human-readable name of a default-palette color ("red", "green", ...);
/// falls back to a hex string for colors outside the table.
std::string color_name(Rgb color);

std::size_t default_palette_capacity();

} // namespace ldseg
