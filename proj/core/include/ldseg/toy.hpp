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

/// Synthetic corpus generator. Each scan is a short slice stack sharing one
/// analytically parameterized shape instance with smooth per-slice size
/// drift; masks are exact by construction.
struct ToyConfig {
  int n_scans = 10;
  std::vector<std::string> classes{"disk"}; // subset of known_shape_classes()
  int image_size = 64;
  std::uint64_t seed = 0;
  int min_slices = 3;
  int max_slices = 5;
  std::string modality = "MR";
};

const std::vector<std::string>& known_shape_classes();

/// Evaluates the analytic foreground predicate of one slice.
BinaryMask render_shape_mask(const ShapeParams& params, int image_size);

/// Generates images/masks under `out_dir` (images/, masks/) and returns the
/// manifest; every record carries its resolved ShapeParams. All records
/// start in the train split. Fully deterministic given cfg.seed.
DatasetManifest synth_toy_dataset(const ToyConfig& cfg, const std::string& out_dir);

} // namespace ldseg
