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
#include "ldseg/manifest.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ldseg/errors.hpp"
#include "ldseg/png_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace ldseg {

std::pair<ImageSample, SegMask> load_pair(const std::string& image_path, const std::string& mask_path) {
  GrayImage raw = read_gray_png(image_path);
  LabelMap labels = read_label_png(mask_path);

  if (raw.height != labels.rows() || raw.width != labels.cols())
    throw DimensionError("image is " + std::to_string(raw.height) + "x" + std::to_string(raw.width) +
                         " but mask is " + std::to_string(labels.rows()) + "x" + std::to_string(labels.cols()));

  ImageSample img;
  img.sample_id = fs::path(image_path).stem().string();
  img.scan_id = img.sample_id;
  img.modality = "unknown";
  img.height = raw.height;
  img.width = raw.width;
  img.pixels.resize(raw.height, raw.width);

  std::uint16_t lo = raw.pixels.empty() ? 0 : raw.pixels[0];
  std::uint16_t hi = lo;
  for (std::uint16_t v : raw.pixels) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const float range = static_cast<float>(hi) - static_cast<float>(lo);
  for (int r = 0; r < raw.height; ++r)
    for (int c = 0; c < raw.width; ++c) {
      const float v = raw.pixels[static_cast<std::size_t>(r) * raw.width + c];
      img.pixels(r, c) = range > 0.0f ? (v - lo) / range : 0.0f;
    }

  SegMask mask;
  mask.height = static_cast<int>(labels.rows());
  mask.width = static_cast<int>(labels.cols());
  mask.labels = std::move(labels);
  for (std::int32_t l : mask.present_labels()) mask.categories[l] = "label_" + std::to_string(l);
  return {std::move(img), std::move(mask)};
}

namespace {

json shape_to_json(const ShapeParams& s) {
  return json{{"class", s.shape_class}, {"center_row", s.center_row}, {"center_col", s.center_col},
              {"radius", s.radius},     {"aux", s.aux},               {"offset_row", s.offset_row},
              {"offset_col", s.offset_col}};
}

ShapeParams shape_from_json(const json& j) {
  ShapeParams s;
  s.shape_class = j.at("class").get<std::string>();
  s.center_row = j.at("center_row").get<double>();
  s.center_col = j.at("center_col").get<double>();
  s.radius = j.at("radius").get<double>();
  s.aux = j.at("aux").get<double>();
  s.offset_row = j.at("offset_row").get<double>();
  s.offset_col = j.at("offset_col").get<double>();
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

} // namespace

void write_pairs_manifest(const std::string& path, const DatasetManifest& manifest) {
  std::ofstream out = open_out(path);
  json meta{{"kind", "pairs_manifest"}, {"seed", manifest.seed},
            {"counts",
             {{"train", manifest.counts.train},
              {"tune", manifest.counts.tune},
              {"validation", manifest.counts.validation}}}};
  out << meta.dump() << "\n";
  for (const auto& r : manifest.records) {
    json cats = json::object();
    for (const auto& [label, name] : r.categories) cats[std::to_string(label)] = name;
    json line{{"sample_id", r.sample_id}, {"scan_id", r.scan_id},   {"image_ref", r.image_ref},
              {"mask_ref", r.mask_ref},   {"modality", r.modality}, {"split", to_string(r.split)},
              {"categories", cats}};
    if (r.shape) line["shape"] = shape_to_json(*r.shape);
    out << line.dump() << "\n";
  }
}

DatasetManifest read_pairs_manifest(const std::string& path) {
  std::ifstream in = open_in(path);
  DatasetManifest m;
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": bad JSON: " + e.what());
    }
    if (first && j.contains("kind")) {
      m.seed = j.value("seed", 0ull);
      first = false;
      continue;
    }
    first = false;
    PairRecord r;
    try {
      r.sample_id = j.at("sample_id").get<std::string>();
      r.scan_id = j.at("scan_id").get<std::string>();
      r.image_ref = j.at("image_ref").get<std::string>();
      r.mask_ref = j.at("mask_ref").get<std::string>();
      r.modality = j.at("modality").get<std::string>();
      r.split = split_from_string(j.at("split").get<std::string>());
      for (const auto& [k, v] : j.at("categories").items())
        r.categories[std::stoi(k)] = v.get<std::string>();
      if (j.contains("shape")) r.shape = shape_from_json(j.at("shape"));
    } catch (const json::exception& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": bad record: " + e.what());
    }
    m.records.push_back(std::move(r));
  }
  m.recount();
  return m;
}

void write_triplets(const std::string& path, const std::vector<Triplet>& triplets) {
  std::ofstream out = open_out(path);
  for (const auto& t : triplets) {
    json entries = json::array();
    for (const auto& e : t.category_entries)
      entries.push_back(json{{"label", e.label}, {"name", e.name}, {"color", {e.color[0], e.color[1], e.color[2]}}});
    json line{{"image_ref", t.image_ref},
              {"mask_ref", t.mask_ref},
              {"modality", t.modality},
              {"category_entries", entries},
              {"description", t.description},
              {"split", to_string(t.split)},
              {"scan_id", t.scan_id},
              {"sample_id", t.sample_id},
              {"provenance", t.provenance}};
    out << line.dump() << "\n";
  }
}

std::vector<Triplet> read_triplets(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<Triplet> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": bad JSON: " + e.what());
    }
    Triplet t;
    try {
      t.image_ref = j.at("image_ref").get<std::string>();
      t.mask_ref = j.at("mask_ref").get<std::string>();
      t.modality = j.at("modality").get<std::string>();
      for (const auto& e : j.at("category_entries")) {
        CategoryEntry ce;
        ce.label = e.at("label").get<std::int32_t>();
        ce.name = e.at("name").get<std::string>();
        const auto& c = e.at("color");
        ce.color = {c.at(0).get<std::uint8_t>(), c.at(1).get<std::uint8_t>(), c.at(2).get<std::uint8_t>()};
        t.category_entries.push_back(std::move(ce));
      }
      t.description = j.at("description").get<std::string>();
      t.split = split_from_string(j.at("split").get<std::string>());
      t.scan_id = j.at("scan_id").get<std::string>();
      t.sample_id = j.value("sample_id", "");
      t.provenance = j.value("provenance", "deterministic");
    } catch (const json::exception& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": bad triplet: " + e.what());
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string resolve_ref(const std::string& manifest_path, const std::string& ref) {
  fs::path p(ref);
  if (p.is_absolute()) return ref;
  return (fs::path(manifest_path).parent_path() / p).string();
}

} // namespace ldseg
