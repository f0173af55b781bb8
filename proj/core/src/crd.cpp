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
#include "ldseg/crd.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "ldseg/errors.hpp"
#include "ldseg/manifest.hpp"
#include "ldseg/png_io.hpp"

namespace fs = std::filesystem;

namespace ldseg {

RgbImage colorize_mask(const SegMask& mask, const ColorPalette& palette) {
  for (std::int32_t label : mask.present_labels())
    if (!palette.has(label)) throw ValueError("mask label " + std::to_string(label) + " missing from palette");

  RgbImage out;
  out.height = mask.height;
  out.width = mask.width;
  out.data.assign(static_cast<std::size_t>(mask.height) * mask.width * 3, 0);
  for (int i = 0; i < mask.height; ++i) {
    for (int j = 0; j < mask.width; ++j) {
      const std::int32_t l = mask.labels(i, j);
      out.set(i, j, l == 0 ? palette.background() : palette.color(l));
    }
  }
  return out;
}

LabelMap labels_from_colors(const RgbImage& image, const ColorPalette& palette) {
  LabelMap out(image.height, image.width);
  for (int i = 0; i < image.height; ++i)
    for (int j = 0; j < image.width; ++j) out(i, j) = palette.label_of(image.at(i, j));
  return out;
}

namespace {

struct RecordOutcome {
  bool ok = false;
  Triplet triplet;
  std::string error;
};

ColorPalette corpus_palette(const DatasetManifest& manifest, const BuildOptions& options) {
  if (!options.palette.entries().empty()) return options.palette;
  std::int32_t max_label = 0;
  for (const auto& rec : manifest.records)
    for (const auto& [label, _] : rec.categories) max_label = std::max(max_label, label);
  return default_palette(static_cast<std::size_t>(std::max<std::int32_t>(max_label, 1)));
}

RecordOutcome process_record(const PairRecord& rec, const std::string& manifest_path,
                             const fs::path& out_dir, const ColorPalette& palette,
                             const BuildOptions& options) {
  RecordOutcome outcome;
  try {
    LabelMap labels = read_label_png(resolve_ref(manifest_path, rec.mask_ref));
    SegMask mask;
    mask.height = static_cast<int>(labels.rows());
    mask.width = static_cast<int>(labels.cols());
    mask.labels = std::move(labels);
    mask.categories = rec.categories;
    mask.validate();

    auto [text, descriptors] = describe_regions(mask, palette, options.thresholds);
    std::string provenance = "deterministic";
    if (options.describer == DescriberKind::kRemote) {
      std::string categories;
      for (const auto& [label, name] : rec.categories) {
        if (!categories.empty()) categories += ", ";
        categories += name;
      }
      RgbImage colored = colorize_mask(mask, palette);
      RemoteOutcome remote = remote_describe(colored, options.remote, text, categories);
      text = remote.text;
      provenance = remote.provenance;
    }

    Triplet t;
    const fs::path image_abs = fs::absolute(resolve_ref(manifest_path, rec.image_ref));
    const fs::path mask_abs = fs::absolute(resolve_ref(manifest_path, rec.mask_ref));
    t.image_ref = fs::relative(image_abs, out_dir).generic_string();
    t.mask_ref = fs::relative(mask_abs, out_dir).generic_string();
    t.modality = rec.modality;
    for (const auto& [label, name] : rec.categories)
      t.category_entries.push_back(CategoryEntry{label, name, palette.color(label)});
    t.description = std::move(text);
    t.split = rec.split;
    t.scan_id = rec.scan_id;
    t.sample_id = rec.sample_id;
    t.provenance = provenance;
    t.validate();

    outcome.ok = true;
    outcome.triplet = std::move(t);
  } catch (const std::exception& e) {
    outcome.error = e.what();
  }
  return outcome;
}

} // namespace

BuildStats build_triplets(const DatasetManifest& manifest, const std::string& manifest_path,
                          const std::string& out_path, const BuildOptions& options) {
  const ColorPalette palette = corpus_palette(manifest, options);
  const fs::path out_dir = fs::absolute(fs::path(out_path)).parent_path();

  std::vector<RecordOutcome> outcomes(manifest.records.size());
  const std::size_t workers =
      options.describer == DescriberKind::kRemote ? std::max<std::size_t>(1, options.max_in_flight) : 1;

  if (workers == 1) {
    for (std::size_t i = 0; i < manifest.records.size(); ++i)
      outcomes[i] = process_record(manifest.records[i], manifest_path, out_dir, palette, options);
  } else {
    // Bounded in-flight remote requests; output order stays manifest order.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < manifest.records.size(); i = next.fetch_add(1))
          outcomes[i] = process_record(manifest.records[i], manifest_path, out_dir, palette, options);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + out_path);
  std::ofstream errlog;
  BuildStats stats;
  const std::string errlog_path = out_path + ".errors.log";
  std::vector<Triplet> written;
  written.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].ok) {
      written.push_back(std::move(outcomes[i].triplet));
      ++stats.written;
    } else {
      if (!errlog.is_open()) {
        errlog.open(errlog_path, std::ios::binary);
        stats.error_log_path = errlog_path;
      }
      errlog << manifest.records[i].sample_id << "\t" << outcomes[i].error << "\n";
      ++stats.failed;
    }
  }
  out.close();
  write_triplets(out_path, written);
  return stats;
}

} // namespace ldseg
