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
#include "ldseg/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ldseg/errors.hpp"

using json = nlohmann::ordered_json;

namespace ldseg {
namespace archive {
namespace {

constexpr char kMagic[8] = {'L', 'D', 'S', 'E', 'G', 'A', 'R', '1'};

} // namespace

void write(const std::string& path, const std::string& kind, const std::string& meta_json,
           const std::vector<NamedArray>& arrays) {
  json header;
  header["format_version"] = 1;
  header["kind"] = kind;
  header["meta"] = json::parse(meta_json.empty() ? "{}" : meta_json);
  json arr = json::array();
  for (const auto& a : arrays)
    arr.push_back(json{{"name", a.name}, {"rows", a.data.rows()}, {"cols", a.data.cols()}});
  header["arrays"] = arr;
  const std::string header_bytes = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t len = header_bytes.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));
  std::vector<float> row;
  for (const auto& a : arrays) {
    row.resize(static_cast<std::size_t>(a.data.cols()));
    for (Eigen::Index r = 0; r < a.data.rows(); ++r) {
      for (Eigen::Index c = 0; c < a.data.cols(); ++c) row[static_cast<std::size_t>(c)] = a.data(r, c);
      out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
  }
  if (!out) throw IoError("failed writing archive: " + path);
}

Contents read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw FormatError("not a weights archive: " + path);
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len == 0 || len > (1ull << 30)) throw FormatError("corrupt archive header: " + path);
  std::string header_bytes(len, '\0');
  in.read(header_bytes.data(), static_cast<std::streamsize>(len));
  if (!in) throw FormatError("truncated archive header: " + path);

  json header;
  try {
    header = json::parse(header_bytes);
  } catch (const json::parse_error& e) {
    throw FormatError("bad archive header JSON: " + std::string(e.what()));
  }

  Contents out;
  try {
    out.kind = header.at("kind").get<std::string>();
    out.meta_json = header.at("meta").dump();
    for (const auto& a : header.at("arrays")) {
      NamedArray na;
      na.name = a.at("name").get<std::string>();
      const Eigen::Index rows = a.at("rows").get<Eigen::Index>();
      const Eigen::Index cols = a.at("cols").get<Eigen::Index>();
      na.data.resize(rows, cols);
      std::vector<float> row(static_cast<std::size_t>(cols));
      for (Eigen::Index r = 0; r < rows; ++r) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!in) throw FormatError("truncated array data in " + path);
        for (Eigen::Index c = 0; c < cols; ++c) na.data(r, c) = row[static_cast<std::size_t>(c)];
      }
      out.arrays.push_back(std::move(na));
    }
  } catch (const json::exception& e) {
    throw FormatError("bad archive header fields: " + std::string(e.what()));
  }
  return out;
}

} // namespace archive

namespace {

json config_to_json(const ModelConfig& c) {
  return json{{"image_size", c.image_size},
              {"patch_size", c.patch_size},
              {"c_v", c.c_v},
              {"c_l", c.c_l},
              {"vis_depth", c.vis_depth},
              {"vis_heads", c.vis_heads},
              {"lm_depth", c.lm_depth},
              {"lm_heads", c.lm_heads},
              {"dec_depth", c.dec_depth},
              {"dec_heads", c.dec_heads},
              {"max_seq_len", c.max_seq_len},
              {"max_gen_len", c.max_gen_len},
              {"tau", c.tau},
              {"seed", c.seed},
              {"lora", {{"enabled", c.lora.enabled}, {"rank", c.lora.rank}, {"alpha", c.lora.alpha}}}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.image_size = j.at("image_size").get<int>();
  c.patch_size = j.at("patch_size").get<int>();
  c.c_v = j.at("c_v").get<int>();
  c.c_l = j.at("c_l").get<int>();
  c.vis_depth = j.at("vis_depth").get<int>();
  c.vis_heads = j.at("vis_heads").get<int>();
  c.lm_depth = j.at("lm_depth").get<int>();
  c.lm_heads = j.at("lm_heads").get<int>();
  c.dec_depth = j.at("dec_depth").get<int>();
  c.dec_heads = j.at("dec_heads").get<int>();
  c.max_seq_len = j.at("max_seq_len").get<int>();
  c.max_gen_len = j.at("max_gen_len").get<int>();
  c.tau = j.at("tau").get<float>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& l = j.at("lora");
  c.lora.enabled = l.at("enabled").get<bool>();
  c.lora.rank = l.at("rank").get<int>();
  c.lora.alpha = l.at("alpha").get<float>();
  return c;
}

} // namespace

void save_model(const SegModel& model, const std::string& path) {
  json meta;
  meta["config"] = config_to_json(model.config());
  meta["vocab"] = model.tokenizer().tokens();

  std::vector<archive::NamedArray> arrays;
  for (const auto& [name, var] : model.params().items()) arrays.push_back({name, var->val});
  archive::write(path, "model", meta.dump(), arrays);
}

SegModel load_model(const std::string& path) {
  archive::Contents contents = archive::read(path);
  if (contents.kind != "model") throw FormatError("archive is not a model checkpoint: " + path);
  json meta;
  try {
    meta = json::parse(contents.meta_json);
  } catch (const json::parse_error& e) {
    throw FormatError("bad model meta: " + std::string(e.what()));
  }
  ModelConfig cfg;
  std::vector<std::string> vocab;
  try {
    cfg = config_from_json(meta.at("config"));
    vocab = meta.at("vocab").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw FormatError("bad model meta fields: " + std::string(e.what()));
  }

  SegModel model(cfg, Tokenizer::from_tokens(std::move(vocab)));
  const auto& items = model.params().items();
  if (items.size() != contents.arrays.size())
    throw FormatError("checkpoint holds " + std::to_string(contents.arrays.size()) + " arrays, model expects " +
                      std::to_string(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& [name, var] = items[i];
    const auto& arr = contents.arrays[i];
    if (arr.name != name) throw FormatError("checkpoint array order mismatch at " + arr.name + " vs " + name);
    if (arr.data.rows() != var->val.rows() || arr.data.cols() != var->val.cols())
      throw FormatError("checkpoint array shape mismatch for " + name);
    var->val = arr.data;
  }
  return model;
}

} // namespace ldseg
