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

#include <optional>
#include <string>

#include "ldseg/metrics.hpp"
#include "ldseg/model.hpp"
#include "ldseg/palette.hpp"
#include "ldseg/regions.hpp"
#include "ldseg/remote.hpp"
#include "ldseg/train.hpp"

namespace ldseg {

struct EvalSettings {
  double both_empty_dsc = 1.0;
  double loose_box_max_shift = 0.15;
  bool box_baselines = false;
};

/// One configuration document for the whole pipeline. Parsing is strict:
/// unknown keys anywhere raise ConfigError before any work happens.
struct RunConfig {
  std::uint64_t seed = 0;
  ModelConfig model;
  TrainConfig train;
  RemoteDescriberConfig describer; // endpoint empty => deterministic describer
  DescribeThresholds thresholds;
  EvalSettings eval;
  std::optional<ColorPalette> palette;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);
};

} // namespace ldseg
