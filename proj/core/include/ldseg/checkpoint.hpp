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
#include <vector>

#include "ldseg/model.hpp"

namespace ldseg {

namespace archive {

/// Single-file container: magic, length-prefixed JSON header, then the
/// arrays as row-major float32 little-endian in header order.
struct NamedArray {
  std::string name;
  ag::Mat data;
};

struct Contents {
  std::string kind;      // "model" | "adapter"
  std::string meta_json; // caller-defined header payload
  std::vector<NamedArray> arrays;
};

void write(const std::string& path, const std::string& kind, const std::string& meta_json,
           const std::vector<NamedArray>& arrays);
Contents read(const std::string& path);

} // namespace archive

void save_model(const SegModel& model, const std::string& path);

/// Rebuilds the model from the archived config, vocabulary and weights.
/// Throws IoError when missing, FormatError on malformed archives.
SegModel load_model(const std::string& path);

} // namespace ldseg
