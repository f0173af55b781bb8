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
#include <utility>
#include <vector>

#include "ldseg/types.hpp"

namespace ldseg {

/// Loads an image/mask pair from disk. Intensities are min-max normalized
/// per slice (a constant slice maps to all zeros). Throws IoError for
/// missing files, FormatError for unsupported rasters and DimensionError
/// when the two rasters disagree in size.
std::pair<ImageSample, SegMask> load_pair(const std::string& image_path, const std::string& mask_path);

/// JSONL pairs manifest (pre-description records). Paths inside the file
/// are relative to the manifest's directory.
void write_pairs_manifest(const std::string& path, const DatasetManifest& manifest);
DatasetManifest read_pairs_manifest(const std::string& path);

/// JSONL triplets, one Triplet per line, UTF-8.
void write_triplets(const std::string& path, const std::vector<Triplet>& triplets);
std::vector<Triplet> read_triplets(const std::string& path);

/// Resolves a manifest-relative reference against the manifest location.
std::string resolve_ref(const std::string& manifest_path, const std::string& ref);

} // namespace ldseg
