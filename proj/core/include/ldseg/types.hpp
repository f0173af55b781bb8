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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ldseg {

using ImageF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using LabelMap = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BinaryMask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Rgb = std::array<std::uint8_t, 3>;

/// One 2D slice with intensities normalized to [0, 1].
struct ImageSample {
  std::string sample_id;
  std::string scan_id;
  std::string modality;
  int height = 0;
  int width = 0;
  ImageF pixels;

  /// Throws ValueError/DimensionError when an invariant is violated.
  void validate() const;
};

/// Integer-labeled segmentation mask; 0 is background.
struct SegMask {
  int height = 0;
  int width = 0;
  LabelMap labels;
  std::map<std::int32_t, std::string> categories;

  void validate() const;

  /// Binary foreground of one label.
  BinaryMask binary(std::int32_t label) const;

  /// Labels present in the mask (excluding background), ascending.
  std::vector<std::int32_t> present_labels() const;
};

/// Interleaved 8-bit RGB image.
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data; // height*width*3, row-major

  Rgb at(int r, int c) const {
    const std::size_t o = (static_cast<std::size_t>(r) * width + c) * 3;
    return {data[o], data[o + 1], data[o + 2]};
  }
  void set(int r, int c, Rgb v) {
    const std::size_t o = (static_cast<std::size_t>(r) * width + c) * 3;
    data[o] = v[0];
    data[o + 1] = v[1];
    data[o + 2] = v[2];
  }
};

enum class Split { kTrain, kTune, kValidation };

std::string to_string(Split s);
Split split_from_string(const std::string& s);

struct CategoryEntry {
  std::int32_t label = 0;
  std::string name;
  Rgb color{0, 0, 0};
};

/// The image-mask-description unit persisted as one JSONL record.
struct Triplet {
  std::string image_ref;
  std::string mask_ref;
  std::string modality;
  std::vector<CategoryEntry> category_entries;
  std::string description;
  Split split = Split::kTrain;
  std::string scan_id;
  std::string sample_id;          // record key, carried alongside the spec fields
  std::string provenance = "deterministic"; // deterministic | remote | fallback

  void validate() const;
};

/// Analytic shape parameters for one generated slice; sufficient to
/// regenerate the mask exactly.
struct ShapeParams {
  std::string shape_class; // disk | rectangle | ring | crescent
  double center_row = 0.0;
  double center_col = 0.0;
  double radius = 0.0;      // disk/ring/crescent outer radius; rectangle half-height
  double aux = 0.0;         // rectangle half-width; ring inner radius; crescent bite radius
  double offset_row = 0.0;  // crescent bite center offset
  double offset_col = 0.0;
};

/// One image/mask pair prior to description, as read from a pairs manifest.
struct PairRecord {
  std::string sample_id;
  std::string scan_id;
  std::string image_ref;
  std::string mask_ref;
  std::string modality;
  Split split = Split::kTrain;
  std::map<std::int32_t, std::string> categories;
  std::optional<ShapeParams> shape; // present for generated corpora
};

struct SplitCounts {
  std::size_t train = 0;
  std::size_t tune = 0;
  std::size_t validation = 0;

  std::size_t total() const { return train + tune + validation; }
};

/// Ordered record list plus the seed that produced the ordering.
struct DatasetManifest {
  std::vector<PairRecord> records;
  std::uint64_t seed = 0;
  SplitCounts counts;

  void recount();
  void validate() const;
};

} // namespace ldseg
