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
#include <string>
#include <vector>

#include "ldseg/types.hpp"

namespace ldseg {

/// Raw single-channel image as stored on disk (8- or 16-bit).
struct GrayImage {
  int height = 0;
  int width = 0;
  int bit_depth = 8; // 8 or 16
  std::vector<std::uint16_t> pixels; // row-major, one value per pixel
};

/// Reads an 8- or 16-bit single-channel PNG.
/// Throws IoError if the file is missing, FormatError for anything that is
/// not a supported grayscale PNG.
GrayImage read_gray_png(const std::string& path);

/// Reads a label mask: 8-bit grayscale or 8-bit indexed PNG. For indexed
/// images the palette index itself is the label value.
LabelMap read_label_png(const std::string& path);

RgbImage read_rgb_png(const std::string& path);

void write_gray_png(const std::string& path, const GrayImage& img);

/// Writes labels as an 8-bit indexed PNG whose pixel values are the label
/// ids; `palette` supplies display colors per index (index 0 = background).
void write_label_png(const std::string& path, const LabelMap& labels,
                     const std::vector<Rgb>& palette);

void write_rgb_png(const std::string& path, const RgbImage& img);

/// In-memory PNG encoding of an RGB image (wire payloads, fixtures).
std::vector<std::uint8_t> encode_rgb_png(const RgbImage& img);

} // namespace ldseg
