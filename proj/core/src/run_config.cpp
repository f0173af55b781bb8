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
#include "ldseg/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ldseg/errors.hpp"

using json = nlohmann::json;

namespace ldseg {
namespace {

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + where + "." + key + "'");
}

template <typename T>
void read_into(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + where + "." + key + "'");
  }
}

void parse_model(const json& j, ModelConfig& m) {
  require_keys(j,
               {"image_size", "patch_size", "c_v", "c_l", "vis_depth", "vis_heads", "lm_depth", "lm_heads",
                "dec_depth", "dec_heads", "max_seq_len", "max_gen_len", "tau", "seed"},
               "model");
  read_into(j, "image_size", m.image_size, "model");
  read_into(j, "patch_size", m.patch_size, "model");
  read_into(j, "c_v", m.c_v, "model");
  read_into(j, "c_l", m.c_l, "model");
  read_into(j, "vis_depth", m.vis_depth, "model");
  read_into(j, "vis_heads", m.vis_heads, "model");
  read_into(j, "lm_depth", m.lm_depth, "model");
  read_into(j, "lm_heads", m.lm_heads, "model");
  read_into(j, "dec_depth", m.dec_depth, "model");
  read_into(j, "dec_heads", m.dec_heads, "model");
  read_into(j, "max_seq_len", m.max_seq_len, "model");
  read_into(j, "max_gen_len", m.max_gen_len, "model");
  read_into(j, "tau", m.tau, "model");
  read_into(j, "seed", m.seed, "model");
}

void parse_train(const json& j, TrainConfig& t) {
  require_keys(j,
               {"epochs", "batch_size", "lr0", "poly_power", "seed", "max_steps", "w_text", "w_bce", "w_dice",
                "dice_smooth", "lora_enabled", "lora_rank", "lora_alpha"},
               "train");
  read_into(j, "epochs", t.epochs, "train");
  read_into(j, "batch_size", t.batch_size, "train");
  read_into(j, "lr0", t.lr0, "train");
  read_into(j, "poly_power", t.poly_power, "train");
  read_into(j, "seed", t.seed, "train");
  if (j.contains("max_steps")) {
    int steps = 0;
    read_into(j, "max_steps", steps, "train");
    t.max_steps = steps;
  }
  read_into(j, "w_text", t.loss.w_text, "train");
  read_into(j, "w_bce", t.loss.w_bce, "train");
  read_into(j, "w_dice", t.loss.w_dice, "train");
  read_into(j, "dice_smooth", t.loss.dice_smooth, "train");
  read_into(j, "lora_enabled", t.lora_enabled, "train");
  read_into(j, "lora_rank", t.lora_rank, "train");
  read_into(j, "lora_alpha", t.lora_alpha, "train");
}

void parse_describer(const json& j, RemoteDescriberConfig& d) {
  require_keys(j, {"endpoint", "timeout_seconds", "retries", "prompt_template"}, "describer");
  read_into(j, "endpoint", d.endpoint, "describer");
  read_into(j, "timeout_seconds", d.timeout_seconds, "describer");
  read_into(j, "retries", d.retries, "describer");
  read_into(j, "prompt_template", d.prompt_template, "describer");
}

void parse_eval(const json& j, EvalSettings& e) {
  require_keys(j, {"both_empty_dsc", "loose_box_max_shift", "box_baselines"}, "eval");
  read_into(j, "both_empty_dsc", e.both_empty_dsc, "eval");
  read_into(j, "loose_box_max_shift", e.loose_box_max_shift, "eval");
  read_into(j, "box_baselines", e.box_baselines, "eval");
}

void parse_thresholds(const json& j, DescribeThresholds& t) {
  require_keys(j, {"blocky_compactness", "elongated_ratio"}, "describe");
  read_into(j, "blocky_compactness", t.blocky_compactness, "describe");
  read_into(j, "elongated_ratio", t.elongated_ratio, "describe");
}

ColorPalette parse_palette(const json& j) {
  require_keys(j, {"background", "colors"}, "palette");
  auto rgb_of = [](const json& arr, const std::string& where) -> Rgb {
    if (!arr.is_array() || arr.size() != 3) throw ConfigError(where + " must be [r, g, b]");
    Rgb c;
    for (int i = 0; i < 3; ++i) {
      const int v = arr.at(i).get<int>();
      if (v < 0 || v > 255) throw ConfigError(where + " channel outside 0..255");
      c[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
    }
    return c;
  };
  Rgb background{0, 0, 0};
  if (j.contains("background")) background = rgb_of(j.at("background"), "palette.background");
  std::map<std::int32_t, Rgb> entries;
  if (j.contains("colors")) {
    if (!j.at("colors").is_object()) throw ConfigError("palette.colors must map label ids to [r, g, b]");
    for (const auto& [key, val] : j.at("colors").items()) {
      std::int32_t label = 0;
      try {
        label = std::stoi(key);
      } catch (const std::exception&) {
        throw ConfigError("palette.colors key '" + key + "' is not a label id");
      }
      entries[label] = rgb_of(val, "palette.colors." + key);
    }
  }
  try {
    return ColorPalette(background, std::move(entries));
  } catch (const ValueError& e) {
    throw ConfigError(std::string("palette: ") + e.what());
  }
}

} // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(j, {"seed", "model", "train", "describer", "describe", "eval", "palette"}, "config");

  RunConfig cfg;
  read_into(j, "seed", cfg.seed, "config");
  cfg.model.seed = cfg.seed;
  cfg.train.seed = cfg.seed;
  if (j.contains("model")) parse_model(j.at("model"), cfg.model);
  if (j.contains("train")) parse_train(j.at("train"), cfg.train);
  if (j.contains("describer")) parse_describer(j.at("describer"), cfg.describer);
  if (j.contains("describe")) parse_thresholds(j.at("describe"), cfg.thresholds);
  if (j.contains("eval")) parse_eval(j.at("eval"), cfg.eval);
  if (j.contains("palette")) cfg.palette = parse_palette(j.at("palette"));
  return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

} // namespace ldseg
