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
#include "ldseg/toy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ldseg/errors.hpp"
#include "ldseg/palette.hpp"
#include "ldseg/png_io.hpp"
#include "ldseg/rng.hpp"

namespace fs = std::filesystem;

namespace ldseg {

const std::vector<std::string>& known_shape_classes() {
  static const std::vector<std::string> classes{"disk", "rectangle", "ring", "crescent"};
  return classes;
}

BinaryMask render_shape_mask(const ShapeParams& p, int image_size) {
  BinaryMask mask(image_size, image_size);
  const double r2 = p.radius * p.radius;
  const double aux2 = p.aux * p.aux;
  for (int i = 0; i < image_size; ++i) {
    for (int j = 0; j < image_size; ++j) {
      const double di = i - p.center_row;
      const double dj = j - p.center_col;
      const double d2 = di * di + dj * dj;
      bool fg = false;
      if (p.shape_class == "disk") {
        fg = d2 <= r2;
      } else if (p.shape_class == "rectangle") {
        fg = std::abs(di) <= p.radius && std::abs(dj) <= p.aux;
      } else if (p.shape_class == "ring") {
        fg = d2 <= r2 && d2 >= aux2;
      } else if (p.shape_class == "crescent") {
        const double bi = i - (p.center_row + p.offset_row);
        const double bj = j - (p.center_col + p.offset_col);
        fg = d2 <= r2 && bi * bi + bj * bj > aux2;
      } else {
        throw ValueError("unknown shape class: " + p.shape_class);
      }
      mask(i, j) = fg ? 1 : 0;
    }
  }
  return mask;
}

DatasetManifest synth_toy_dataset(const ToyConfig& cfg, const std::string& out_dir) {
  if (cfg.n_scans < 1) throw ValueError("n_scans must be >= 1");
  if (cfg.image_size < 16) throw ValueError("image_size must be >= 16");
  if (cfg.classes.empty()) throw ValueError("at least one shape class required");
  if (cfg.min_slices < 1 || cfg.max_slices < cfg.min_slices) throw ValueError("bad slice range");
  const auto& known = known_shape_classes();
  for (const auto& c : cfg.classes)
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw ValueError("unknown shape class: " + c);

  fs::create_directories(fs::path(out_dir) / "images");
  fs::create_directories(fs::path(out_dir) / "masks");

  DatasetManifest manifest;
  manifest.seed = cfg.seed;
  Rng rng(cfg.seed);
  const double size = cfg.image_size;

  for (int s = 0; s < cfg.n_scans; ++s) {
    const std::string& cls = cfg.classes[static_cast<std::size_t>(s) % cfg.classes.size()];
    const std::int32_t label =
        static_cast<std::int32_t>(std::find(cfg.classes.begin(), cfg.classes.end(), cls) - cfg.classes.begin()) + 1;

    const int n_slices =
        cfg.min_slices + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(cfg.max_slices - cfg.min_slices + 1)));
    const double cr = rng.uniform(0.35, 0.65) * size;
    const double cc = rng.uniform(0.35, 0.65) * size;
    const double base_r = rng.uniform(0.16, 0.26) * size;
    const double drift = rng.uniform(-0.18, 0.18);
    const double bite_angle = rng.uniform(0.0, 2.0 * M_PI);
    const double rect_aspect = rng.uniform(0.5, 1.8);
    const double scan_brightness = rng.uniform(0.62, 0.8);

    char scan_name[32];
    std::snprintf(scan_name, sizeof(scan_name), "scan%04d", s);

    for (int k = 0; k < n_slices; ++k) {
      const double t = n_slices > 1 ? static_cast<double>(k) / (n_slices - 1) - 0.5 : 0.0;
      const double r = std::max(3.0, base_r * (1.0 + drift * t));

      ShapeParams p;
      p.shape_class = cls;
      p.center_row = cr;
      p.center_col = cc;
      p.radius = r;
      if (cls == "rectangle") {
        p.aux = std::max(3.0, r * rect_aspect);
      } else if (cls == "ring") {
        p.aux = 0.55 * r;
      } else if (cls == "crescent") {
        p.aux = 0.85 * r;
        p.offset_row = 0.75 * r * std::sin(bite_angle);
        p.offset_col = 0.75 * r * std::cos(bite_angle);
      }

      BinaryMask fg = render_shape_mask(p, cfg.image_size);
      if (fg.cast<int>().sum() == 0) throw NumericError("toy generator produced an empty mask");

      GrayImage img;
      img.height = cfg.image_size;
      img.width = cfg.image_size;
      img.bit_depth = 8;
      img.pixels.resize(static_cast<std::size_t>(cfg.image_size) * cfg.image_size);
      for (int i = 0; i < cfg.image_size; ++i) {
        for (int j = 0; j < cfg.image_size; ++j) {
          double v = fg(i, j) ? scan_brightness + rng.uniform(-0.06, 0.06) : rng.uniform(0.05, 0.25);
          v = std::clamp(v, 0.0, 1.0);
          img.pixels[static_cast<std::size_t>(i) * cfg.image_size + j] =
              static_cast<std::uint16_t>(std::lround(v * 255.0));
        }
      }

      LabelMap labels = fg.cast<std::int32_t>() * label;

      char slice_name[48];
      std::snprintf(slice_name, sizeof(slice_name), "%s_s%02d", scan_name, k);
      const std::string image_ref = std::string("images/") + slice_name + ".png";
      const std::string mask_ref = std::string("masks/") + slice_name + ".png";
      write_gray_png((fs::path(out_dir) / image_ref).string(), img);
      write_label_png((fs::path(out_dir) / mask_ref).string(), labels,
                      default_palette(static_cast<std::size_t>(cfg.classes.size())).as_index_table());

      PairRecord rec;
      rec.sample_id = slice_name;
      rec.scan_id = scan_name;
      rec.image_ref = image_ref;
      rec.mask_ref = mask_ref;
      rec.modality = cfg.modality;
      rec.split = Split::kTrain;
      rec.categories[label] = cls;
      rec.shape = p;
      manifest.records.push_back(std::move(rec));
    }
  }
  manifest.recount();
  return manifest;
}

} // namespace ldseg
