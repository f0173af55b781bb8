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
#include "ldseg/types.hpp"

namespace ldseg {

/// Mean-pooled last-layer encoder feature per image; one row per input, in
/// input order.
ag::Mat export_features(const SegModel& model, const std::vector<ImageSample>& images);

/// CSV with columns id,f0..f{C-1}.
void write_features_csv(const std::string& path, const std::vector<std::string>& ids, const ag::Mat& rows);

} // namespace ldseg
