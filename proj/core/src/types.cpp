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
#include "ldseg/types.hpp"

#include <algorithm>
#include <set>

#include "ldseg/errors.hpp"

namespace ldseg {

void ImageSample::validate() const {
  if (height <= 0 || width <= 0) throw ValueError("ImageSample: height and width must be positive");
  if (pixels.rows() != height || pixels.cols() != width)
    throw DimensionError("ImageSample: pixel array is " + std::to_string(pixels.rows()) + "x" +
                         std::to_string(pixels.cols()) + ", expected " + std::to_string(height) + "x" +
                         std::to_string(width));
  if (scan_id.empty()) throw ValueError("ImageSample: scan_id must be non-empty");
  if ((pixels.array() < 0.0f).any() || (pixels.array() > 1.0f).any())
    throw ValueError("ImageSample: intensities must lie in [0, 1]");
}

void SegMask::validate() const {
  if (height <= 0 || width <= 0) throw ValueError("SegMask: height and width must be positive");
  if (labels.rows() != height || labels.cols() != width)
    throw DimensionError("SegMask: label array does not match declared dimensions");
  for (Eigen::Index r = 0; r < labels.rows(); ++r) {
    for (Eigen::Index c = 0; c < labels.cols(); ++c) {
      const std::int32_t v = labels(r, c);
      if (v < 0) throw ValueError("SegMask: negative label value");
      if (v != 0 && categories.find(v) == categories.end())
        throw ValueError("SegMask: label " + std::to_string(v) + " missing from category map");
    }
  }
}

BinaryMask SegMask::binary(std::int32_t label) const {
  BinaryMask out(labels.rows(), labels.cols());
  for (Eigen::Index r = 0; r < labels.rows(); ++r)
    for (Eigen::Index c = 0; c < labels.cols(); ++c) out(r, c) = labels(r, c) == label ? 1 : 0;
  return out;
}

std::vector<std::int32_t> SegMask::present_labels() const {
  std::set<std::int32_t> seen;
  for (Eigen::Index r = 0; r < labels.rows(); ++r)
    for (Eigen::Index c = 0; c < labels.cols(); ++c)
      if (labels(r, c) != 0) seen.insert(labels(r, c));
  return {seen.begin(), seen.end()};
}

std::string to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kTune: return "tune";
    case Split::kValidation: return "validation";
  }
  throw ValueError("unknown split");
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "tune") return Split::kTune;
  if (s == "validation") return Split::kValidation;
  throw ValueError("unknown split name: " + s);
}

void Triplet::validate() const {
  if (description.empty()) throw ValueError("Triplet: description must be non-empty");
  std::set<Rgb> colors;
  for (const auto& e : category_entries) {
    if (!colors.insert(e.color).second)
      throw ValueError("Triplet: category colors must be pairwise distinct");
  }
}

void DatasetManifest::recount() {
  counts = SplitCounts{};
  for (const auto& r : records) {
    switch (r.split) {
      case Split::kTrain: ++counts.train; break;
      case Split::kTune: ++counts.tune; break;
      case Split::kValidation: ++counts.validation; break;
    }
  }
}

void DatasetManifest::validate() const {
  if (counts.total() != records.size())
    throw ValueError("DatasetManifest: split counts do not sum to record count");
  std::set<std::string> ids;
  for (const auto& r : records) {
    if (r.sample_id.empty()) throw ValueError("DatasetManifest: empty sample_id");
    if (r.scan_id.empty()) throw ValueError("DatasetManifest: empty scan_id for " + r.sample_id);
    if (!ids.insert(r.sample_id).second)
      throw ValueError("DatasetManifest: duplicate sample_id " + r.sample_id);
  }
}

} // namespace ldseg
