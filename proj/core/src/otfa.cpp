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
#include "ldseg/otfa.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ldseg/checkpoint.hpp"
#include "ldseg/errors.hpp"
#include "ldseg/prompts.hpp"

using json = nlohmann::ordered_json;

namespace ldseg {

void AdapterMemory::validate() const {
  if (grid_h <= 0 || grid_w <= 0) throw ValueError("adapter: grid dimensions must be positive");
  if (masked_embedding.rows() != static_cast<Eigen::Index>(grid_h) * grid_w)
    throw DimensionError("adapter: embedding rows disagree with grid shape");
  if (sigma_row <= 0.0 || sigma_col <= 0.0) throw ValueError("adapter: sigmas must be positive");
  if (center_row < 0.0 || center_row > grid_h - 1 || center_col < 0.0 || center_col > grid_w - 1)
    throw ValueError("adapter: center outside grid bounds");
  if (class_name.empty()) throw ValueError("adapter: class name must be non-empty");
}

BinaryMask downsample_mask(const BinaryMask& mask, int grid_h, int grid_w) {
  if (grid_h <= 0 || grid_w <= 0) throw ValueError("downsample_mask: bad grid shape");
  if (mask.rows() % grid_h != 0 || mask.cols() % grid_w != 0)
    throw DimensionError("downsample_mask: mask dimensions must be multiples of the grid");
  const int ch = static_cast<int>(mask.rows()) / grid_h;
  const int cw = static_cast<int>(mask.cols()) / grid_w;
  BinaryMask out(grid_h, grid_w);
  for (int i = 0; i < grid_h; ++i) {
    for (int j = 0; j < grid_w; ++j) {
      long count = 0;
      for (int r = 0; r < ch; ++r)
        for (int c = 0; c < cw; ++c) count += mask(i * ch + r, j * cw + c);
      out(i, j) = 2 * count >= ch * cw ? 1 : 0; // area fraction >= 0.5
    }
  }
  return out;
}

AdapterMemory register_exemplar(const SegModel& model, const ImageSample& image, const SegMask& mask,
                                const std::string& class_name) {
  std::int32_t label = -1;
  for (const auto& [l, name] : mask.categories)
    if (name == class_name) label = l;
  if (label < 0) throw ValueError("register: class '" + class_name + "' not present in mask categories");

  BinaryMask fg = mask.binary(label);
  if (fg.cast<long>().sum() == 0) throw ValueError("register: empty foreground for class '" + class_name + "'");

  ag::NoGradGuard no_grad;
  PatchEmbeddingGrid grid = model.encode_image(image);
  const int gh = grid.grid_h;
  const int gw = grid.grid_w;

  BinaryMask cell_fg = downsample_mask(fg, gh, gw);
  if (cell_fg.cast<long>().sum() == 0) {
    // Object too thin for any half-covered cell: mark the cell holding the
    // pixel centroid so the registered state stays non-degenerate.
    double sr = 0.0, sc = 0.0;
    long n = 0;
    for (Eigen::Index r = 0; r < fg.rows(); ++r)
      for (Eigen::Index c = 0; c < fg.cols(); ++c)
        if (fg(r, c)) {
          sr += static_cast<double>(r);
          sc += static_cast<double>(c);
          ++n;
        }
    const int ci = std::clamp(static_cast<int>(sr / n / (fg.rows() / gh)), 0, gh - 1);
    const int cj = std::clamp(static_cast<int>(sc / n / (fg.cols() / gw)), 0, gw - 1);
    cell_fg(ci, cj) = 1;
  }

  AdapterMemory memory;
  memory.grid_h = gh;
  memory.grid_w = gw;
  memory.class_name = class_name;
  memory.masked_embedding = grid.tokens->val;
  double sum_i = 0.0, sum_j = 0.0;
  long count = 0;
  for (int i = 0; i < gh; ++i) {
    for (int j = 0; j < gw; ++j) {
      if (!cell_fg(i, j)) {
        memory.masked_embedding.row(i * gw + j).setZero();
      } else {
        sum_i += i;
        sum_j += j;
        ++count;
      }
    }
  }
  memory.center_row = sum_i / static_cast<double>(count);
  memory.center_col = sum_j / static_cast<double>(count);

  double var_i = 0.0, var_j = 0.0;
  for (int i = 0; i < gh; ++i)
    for (int j = 0; j < gw; ++j)
      if (cell_fg(i, j)) {
        var_i += (i - memory.center_row) * (i - memory.center_row);
        var_j += (j - memory.center_col) * (j - memory.center_col);
      }
  memory.sigma_row = std::max(std::sqrt(var_i / static_cast<double>(count)), 0.5);
  memory.sigma_col = std::max(std::sqrt(var_j / static_cast<double>(count)), 0.5);
  memory.validate();
  return memory;
}

LocationPriorMap gaussian_prior(const AdapterMemory& memory, int grid_h, int grid_w) {
  memory.validate();
  LocationPriorMap prior;
  prior.values.resize(grid_h, grid_w);
  const double sr2 = 2.0 * memory.sigma_row * memory.sigma_row;
  const double sc2 = 2.0 * memory.sigma_col * memory.sigma_col;
  for (int i = 0; i < grid_h; ++i)
    for (int j = 0; j < grid_w; ++j) {
      const double di = i - memory.center_row;
      const double dj = j - memory.center_col;
      prior.values(i, j) = static_cast<float>(std::exp(-(di * di / sr2 + dj * dj / sc2)));
    }
  // Renormalize so the cell nearest the center peaks at exactly 1.
  Eigen::Index pi = 0, pj = 0;
  const float mx = prior.values.maxCoeff(&pi, &pj);
  prior.values /= mx;
  prior.peak_row = static_cast<int>(pi);
  prior.peak_col = static_cast<int>(pj);
  return prior;
}

ag::Mat cross_attend(const ag::Mat& query, const ag::Mat& masked, bool scaled) {
  if (query.rows() != masked.rows() || query.cols() != masked.cols())
    throw DimensionError("cross_attend: query/masked shape mismatch");
  if (!query.allFinite() || !masked.allFinite()) throw NumericError("cross_attend: non-finite inputs");

  ag::Mat scores = query * masked.transpose();
  if (scaled) scores /= std::sqrt(static_cast<float>(query.cols()));
  ag::Mat out(query.rows(), query.cols());
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    Eigen::ArrayXf row = scores.row(r).transpose().array();
    row -= row.maxCoeff();
    Eigen::ArrayXf w = row.exp();
    w /= w.sum();
    out.row(r) = (masked.transpose() * w.matrix()).transpose();
  }
  return out;
}

SegResult adapted_segment(const SegModel& model, const ImageSample& image, const AdapterMemory& memory,
                          const AdaptOptions& options) {
  memory.validate();
  ag::NoGradGuard no_grad;
  PatchEmbeddingGrid grid = model.encode_image(image);
  if (grid.grid_h != memory.grid_h || grid.grid_w != memory.grid_w)
    throw DimensionError("adapted_segment: adapter grid does not match the model grid");

  ag::Mat features = grid.tokens->val;
  if (options.location) {
    const LocationPriorMap prior = gaussian_prior(memory, grid.grid_h, grid.grid_w);
    for (int i = 0; i < grid.grid_h; ++i)
      for (int j = 0; j < grid.grid_w; ++j) {
        const float g = prior.values(i, j);
        auto row = features.row(static_cast<Eigen::Index>(i) * grid.grid_w + j);
        if (options.additive_location)
          row.array() += g;
        else
          row *= (1.0f + g);
      }
  }

  ag::Var enhanced = ag::constant(features);
  ag::Var fused = model.fused_grid(enhanced);
  if (options.semantic) {
    ag::Mat attended = cross_attend(features, memory.masked_embedding, options.scaled_attention);
    fused = ag::add(fused, ag::constant(std::move(attended)));
  }

  const auto [user_text, target_text] = render_prompt(memory.class_name, image.modality);
  (void)target_text;
  GenerationOutput gen = model.generate_text(PatchEmbeddingGrid{enhanced, grid.grid_h, grid.grid_w}, user_text);

  SegResult result;
  const int hw = model.config().image_size;
  if (!gen.has_seg()) {
    result.mask.probabilities = ImageF::Zero(hw, hw);
    result.mask.binary = BinaryMask::Zero(hw, hw);
    result.text = gen.text.empty() ? std::string(SegModel::kNoMaskMarker)
                                   : gen.text + " " + SegModel::kNoMaskMarker;
    result.seg_emitted = false;
    return result;
  }
  result.mask = model.decode_mask(ag::constant(*gen.seg_hidden), fused);
  result.text = gen.text;
  result.seg_emitted = true;
  return result;
}

void save_adapter(const AdapterMemory& memory, const std::string& path) {
  memory.validate();
  json meta{{"class_name", memory.class_name},
            {"grid_h", memory.grid_h},
            {"grid_w", memory.grid_w},
            {"gaussian",
             {{"center_row", memory.center_row},
              {"center_col", memory.center_col},
              {"sigma_row", memory.sigma_row},
              {"sigma_col", memory.sigma_col}}}};
  archive::write(path, "adapter", meta.dump(), {{"masked_embedding", memory.masked_embedding}});
}

AdapterMemory load_adapter(const std::string& path) {
  archive::Contents contents = archive::read(path);
  if (contents.kind != "adapter") throw FormatError("archive is not an adapter: " + path);
  AdapterMemory memory;
  try {
    json meta = json::parse(contents.meta_json);
    memory.class_name = meta.at("class_name").get<std::string>();
    memory.grid_h = meta.at("grid_h").get<int>();
    memory.grid_w = meta.at("grid_w").get<int>();
    const auto& g = meta.at("gaussian");
    memory.center_row = g.at("center_row").get<double>();
    memory.center_col = g.at("center_col").get<double>();
    memory.sigma_row = g.at("sigma_row").get<double>();
    memory.sigma_col = g.at("sigma_col").get<double>();
  } catch (const json::exception& e) {
    throw FormatError("bad adapter meta: " + std::string(e.what()));
  }
  if (contents.arrays.size() != 1 || contents.arrays[0].name != "masked_embedding")
    throw FormatError("adapter archive must hold exactly the masked_embedding array");
  memory.masked_embedding = contents.arrays[0].data;
  memory.validate();
  return memory;
}

} // namespace ldseg
