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
#include <optional>
#include <string>
#include <vector>

#include "ldseg/losses.hpp"
#include "ldseg/model.hpp"
#include "ldseg/types.hpp"

namespace ldseg {

struct TrainConfig {
  int epochs = 5;
  int batch_size = 1;
  double lr0 = 3e-4;
  double poly_power = 1.0;
  std::uint64_t seed = 0;
  LossWeights loss;
  bool lora_enabled = false;
  int lora_rank = 4;
  float lora_alpha = 8.0f;
  std::optional<int> max_steps; // cap on optimizer steps (overrides epochs when smaller)

  void validate() const;
};

/// One trainable unit: an image, one category of its mask, and the
/// conversation pair for that category.
struct TrainItem {
  std::string sample_id;
  std::string scan_id;
  std::string image_path;
  std::string mask_path;
  std::string class_name;
  std::string modality;
  std::int32_t label = 0;
  Split split = Split::kTrain;
};

/// Expands triplets into per-category train items with absolute paths.
std::vector<TrainItem> expand_triplets(const std::string& triplets_path);

/// Builds the word-level vocabulary covering the conversation templates and
/// every (class, modality) pair in the items.
Tokenizer build_tokenizer(const std::vector<TrainItem>& items);

struct StepRecord {
  int step = 0;
  double lr = 0.0;
  double text_loss = 0.0;
  double bce_loss = 0.0;
  double dice_loss = 0.0;
  double total = 0.0;
};

struct TrainResult {
  std::string checkpoint_path;
  std::string vocab_path;
  std::string curve_path;
  std::vector<StepRecord> curve;
  int steps = 0;
  double best_tune_dsc = -1.0; // -1 when the tune split is empty
  bool aborted_non_finite = false;
};

/// End-to-end training over CRD triplets. Deterministic given cfg.seed:
/// fixed init, fixed shuffles, single-threaded updates. Saves the
/// best-on-tune checkpoint (falling back to the final weights when the tune
/// split is empty) plus vocab.txt and the loss curve CSV under out_dir.
TrainResult train_loop(const std::string& triplets_path, const ModelConfig& model_cfg, const TrainConfig& cfg,
                       const std::string& out_dir);

/// Mean DSC of model.segment over the given items (text prompting).
double mean_dsc_over_items(const SegModel& model, const std::vector<TrainItem>& items);

/// Loads one item's image/mask pair and the binary target for its label.
std::pair<ImageSample, BinaryMask> load_item(const TrainItem& item);

} // namespace ldseg
