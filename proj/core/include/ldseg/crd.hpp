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

#include <cstddef>
#include <string>

#include "ldseg/palette.hpp"
#include "ldseg/regions.hpp"
#include "ldseg/remote.hpp"
#include "ldseg/types.hpp"

namespace ldseg {

/// Renders each labeled category in its palette color over the palette
/// background. Throws ValueError when a mask label has no palette entry.
RgbImage colorize_mask(const SegMask& mask, const ColorPalette& palette);

/// Exact inverse of colorize_mask for palette colors.
LabelMap labels_from_colors(const RgbImage& image, const ColorPalette& palette);

enum class DescriberKind { kDeterministic, kRemote };

struct BuildOptions {
  ColorPalette palette;        // empty => sized default palette per corpus
  DescriberKind describer = DescriberKind::kDeterministic;
  RemoteDescriberConfig remote;
  DescribeThresholds thresholds;
  std::size_t max_in_flight = 4; // remote request concurrency bound
};

struct BuildStats {
  std::size_t written = 0;
  std::size_t failed = 0;
  std::string error_log_path; // empty when no record failed
};

/// Converts every manifest pair into an image-mask-description triplet and
/// writes them as JSONL to out_path, preserving manifest order. Per-record
/// failures are logged to "<out_path>.errors.log" instead of aborting the
/// build. Deterministic describing is idempotent (byte-identical reruns).
BuildStats build_triplets(const DatasetManifest& manifest, const std::string& manifest_path,
                          const std::string& out_path, const BuildOptions& options);

} // namespace ldseg
