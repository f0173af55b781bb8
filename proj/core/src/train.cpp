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
#include "ldseg/train.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "ldseg/checkpoint.hpp"
#include "ldseg/errors.hpp"
#include "ldseg/manifest.hpp"
#include "ldseg/metrics.hpp"
#include "ldseg/optim.hpp"
#include "ldseg/prompts.hpp"
#include "ldseg/rng.hpp"

namespace fs = std::filesystem;

namespace ldseg {

void TrainConfig::validate() const {
  if (epochs < 1) throw ValueError("epochs must be >= 1");
  if (batch_size < 1) throw ValueError("batch_size must be >= 1");
  if (lr0 <= 0.0) throw ValueError("lr0 must be positive");
  if (poly_power <= 0.0) throw ValueError("poly decay power must be positive");
  loss.validate();
  if (lora_enabled && (lora_rank < 1 || lora_alpha <= 0.0f)) throw ValueError("bad adapter settings");
  if (max_steps && *max_steps < 1) throw ValueError("max_steps must be >= 1");
}

std::vector<TrainItem> expand_triplets(const std::string& triplets_path) {
  std::vector<TrainItem> items;
  for (const auto& t : read_triplets(triplets_path)) {
    for (const auto& entry : t.category_entries) {
      TrainItem item;
      item.sample_id = t.sample_id;
      item.scan_id = t.scan_id;
      item.image_path = resolve_ref(triplets_path, t.image_ref);
      item.mask_path = resolve_ref(triplets_path, t.mask_ref);
      item.class_name = entry.name;
      item.modality = t.modality;
      item.label = entry.label;
      item.split = t.split;
      items.push_back(std::move(item));
    }
  }
  return items;
}

Tokenizer build_tokenizer(const std::vector<TrainItem>& items) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& item : items) pairs.insert({item.class_name, item.modality});
  if (pairs.empty()) pairs.insert({"object", "image"});
  std::vector<std::string> texts;
  for (const auto& [cls, modality] : pairs) {
    auto [user_text, target_text] = render_prompt(cls, modality);
    texts.push_back(user_text);
    texts.push_back(target_text);
  }
  return Tokenizer::build(texts);
}

std::pair<ImageSample, BinaryMask> load_item(const TrainItem& item) {
  auto [image, mask] = load_pair(item.image_path, item.mask_path);
  image.sample_id = item.sample_id;
  image.scan_id = item.scan_id;
  image.modality = item.modality;
  return {std::move(image), mask.binary(item.label)};
}

double mean_dsc_over_items(const SegModel& model, const std::vector<TrainItem>& items) {
  if (items.empty()) throw ValueError("mean_dsc_over_items: no items");
  double total = 0.0;
  for (const auto& item : items) {
    auto [image, gt] = load_item(item);
    SegResult result = model.segment(image, item.class_name, item.modality);
    total += dsc(result.mask.binary, gt);
  }
  return total / static_cast<double>(items.size());
}

namespace {

ag::Mat flatten_binary(const BinaryMask& mask) {
  ag::Mat out(static_cast<Eigen::Index>(mask.rows()) * mask.cols(), 1);
  for (Eigen::Index r = 0; r < mask.rows(); ++r)
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      out(r * mask.cols() + c, 0) = static_cast<float>(mask(r, c));
  return out;
}

} // namespace

TrainResult train_loop(const std::string& triplets_path, const ModelConfig& model_cfg, const TrainConfig& cfg,
                       const std::string& out_dir) {
  cfg.validate();
  std::vector<TrainItem> all_items = expand_triplets(triplets_path);
  std::vector<TrainItem> train_items, tune_items;
  for (const auto& item : all_items) {
    if (item.split == Split::kTrain) train_items.push_back(item);
    if (item.split == Split::kTune) tune_items.push_back(item);
  }
  if (train_items.empty()) throw ValueError("train_loop: empty train split");

  ModelConfig mc = model_cfg;
  mc.lora.enabled = cfg.lora_enabled;
  mc.lora.rank = cfg.lora_rank;
  mc.lora.alpha = cfg.lora_alpha;
  mc.validate();

  SegModel model(mc, build_tokenizer(all_items));

  if (cfg.lora_enabled) {
    // Freeze the language model backbone; adapters and non-LM modules train.
    model.params().set_trainable([](const std::string& name) {
      if (name.rfind("lm.", 0) != 0) return true;
      return name.find(".lora_") != std::string::npos;
    });
  }

  std::vector<ag::Var> trainable;
  for (const auto& [name, var] : model.params().items())
    if (var->requires_grad) trainable.push_back(var);
  Adam adam(trainable);

  fs::create_directories(out_dir);
  TrainResult result;
  result.checkpoint_path = (fs::path(out_dir) / "model.ldsg").string();
  result.vocab_path = (fs::path(out_dir) / "vocab.txt").string();
  result.curve_path = (fs::path(out_dir) / "loss_curve.csv").string();
  model.tokenizer().save(result.vocab_path);

  const long steps_per_epoch =
      (static_cast<long>(train_items.size()) + cfg.batch_size - 1) / cfg.batch_size;
  long total_steps = steps_per_epoch * cfg.epochs;
  if (cfg.max_steps) total_steps = std::min<long>(total_steps, *cfg.max_steps);

  Rng shuffle_rng(cfg.seed);
  double best_tune = -1.0;
  bool saved = false;
  long step = 0;
  bool aborted = false;

  for (int epoch = 0; epoch < cfg.epochs && step < total_steps && !aborted; ++epoch) {
    std::vector<std::size_t> order(train_items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle_rng.shuffle(order);

    for (std::size_t batch_start = 0; batch_start < order.size() && step < total_steps && !aborted;
         batch_start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t batch_end =
          std::min(order.size(), batch_start + static_cast<std::size_t>(cfg.batch_size));
      const float inv_batch = 1.0f / static_cast<float>(batch_end - batch_start);

      adam.zero_grad();
      model.params().zero_grads();
      double text_acc = 0.0, bce_acc = 0.0, dice_acc = 0.0, total_acc = 0.0;
      try {
        for (std::size_t bi = batch_start; bi < batch_end; ++bi) {
          const TrainItem& item = train_items[order[bi]];
          auto [image, gt] = load_item(item);

          TeacherForward tf = model.teacher_forward(image, item.class_name, item.modality);
          ag::Var fused = model.fused_grid(tf.grid);
          ag::Var prompt = model.project_seg(tf.seg_hidden);
          ag::Var logits = model.decode_logits(prompt, fused, mc.grid_side(), mc.grid_side());
          ag::Var probs = ag::sigmoid(logits);
          ag::Var gt_var = ag::constant(flatten_binary(gt));

          ag::Var bce = bce_loss(probs, gt_var);
          ag::Var dice = dice_loss(probs, gt_var, cfg.loss.dice_smooth);
          ag::Var total = total_loss(tf.text_loss, bce, dice, cfg.loss);

          text_acc += tf.text_loss->val(0, 0);
          bce_acc += bce->val(0, 0);
          dice_acc += dice->val(0, 0);
          total_acc += total->val(0, 0);
          ag::backward(ag::scale(total, inv_batch));
        }
      } catch (const NumericError&) {
        aborted = true;
        break;
      }

      const double lr = poly_lr(step, total_steps, cfg.lr0, cfg.poly_power);
      adam.step(lr);

      StepRecord rec;
      rec.step = static_cast<int>(step);
      rec.lr = lr;
      rec.text_loss = text_acc * inv_batch;
      rec.bce_loss = bce_acc * inv_batch;
      rec.dice_loss = dice_acc * inv_batch;
      rec.total = total_acc * inv_batch;
      result.curve.push_back(rec);
      ++step;
    }

    if (!tune_items.empty() && !aborted) {
      const double tune_dsc = mean_dsc_over_items(model, tune_items);
      if (tune_dsc > best_tune) {
        best_tune = tune_dsc;
        save_model(model, result.checkpoint_path);
        saved = true;
      }
    }
  }

  // Final fallback: keep the last weights when nothing better was banked.
  if (!saved) save_model(model, result.checkpoint_path);

  std::ofstream curve(result.curve_path, std::ios::binary);
  if (!curve) throw IoError("cannot open for writing: " + result.curve_path);
  curve << "step,lr,text_loss,bce_loss,dice_loss,total\n";
  char line[256];
  for (const auto& r : result.curve) {
    std::snprintf(line, sizeof(line), "%d,%.8g,%.8g,%.8g,%.8g,%.8g\n", r.step, r.lr, r.text_loss, r.bce_loss,
                  r.dice_loss, r.total);
    curve << line;
  }

  result.steps = static_cast<int>(step);
  result.best_tune_dsc = best_tune;
  result.aborted_non_finite = aborted;
  return result;
}

} // namespace ldseg
