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

#include <string>

#include "ldseg/model.hpp"
#include "ldseg/types.hpp"

namespace ldseg {

/// Registered one-shot state: masked vision embedding plus the axis-aligned
/// Gaussian location prior fitted to the exemplar's foreground.
struct AdapterMemory {
  ag::Mat masked_embedding; // N x C_v
  double center_row = 0.0;  // grid coordinates
  double center_col = 0.0;
  double sigma_row = 0.5;
  double sigma_col = 0.5;
  std::string class_name;
  int grid_h = 0;
  int grid_w = 0;

  void validate() const;
};

struct LocationPriorMap {
  ag::Mat values; // grid_h x grid_w, strictly positive, peak 1
  int peak_row = 0;
  int peak_col = 0;
};

/// Cell is foreground when the covered pixel area fraction is >= 0.5.
BinaryMask downsample_mask(const BinaryMask& mask, int grid_h, int grid_w);

/// Stage one: registers semantic (masked embedding) and spatial (Gaussian)
/// state from a single exemplar of the class. Throws ValueError when the
/// class has no foreground.
AdapterMemory register_exemplar(const SegModel& model, const ImageSample& image, const SegMask& mask,
                                const std::string& class_name);

/// Axis-aligned Gaussian over grid cells, renormalized to peak exactly 1 at
/// the cell nearest the center.
LocationPriorMap gaussian_prior(const AdapterMemory& memory, int grid_h, int grid_w);

/// Parameter-free attention: rows of `query` attend over `masked` as both
/// key and value: softmax(Q K^T) V, unscaled by default. Throws on shape
/// mismatch and non-finite inputs.
ag::Mat cross_attend(const ag::Mat& query, const ag::Mat& masked, bool scaled = false);

struct AdaptOptions {
  bool semantic = true;         // add cross-attended features to the decoder grid
  bool location = true;         // scale encoder features by (1 + prior)
  bool additive_location = false; // add the prior instead of scaling
  bool scaled_attention = false;  // 1/sqrt(C) attention scaling
};

/// Stage two: text-driven segmentation with the registered state applied.
SegResult adapted_segment(const SegModel& model, const ImageSample& image, const AdapterMemory& memory,
                          const AdaptOptions& options = {});

void save_adapter(const AdapterMemory& memory, const std::string& path);
AdapterMemory load_adapter(const std::string& path);

} // namespace ldseg
