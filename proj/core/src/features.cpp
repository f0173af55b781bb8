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
#include "ldseg/features.hpp"

#include <cstdio>
#include <fstream>

#include "ldseg/errors.hpp"

namespace ldseg {

ag::Mat export_features(const SegModel& model, const std::vector<ImageSample>& images) {
  ag::Mat out(static_cast<Eigen::Index>(images.size()), model.config().c_v);
  for (std::size_t i = 0; i < images.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = model.pooled_feature(images[i]);
  return out;
}

void write_features_csv(const std::string& path, const std::vector<std::string>& ids, const ag::Mat& rows) {
  if (static_cast<Eigen::Index>(ids.size()) != rows.rows())
    throw DimensionError("write_features_csv: id count must match row count");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "id";
  for (Eigen::Index c = 0; c < rows.cols(); ++c) out << ",f" << c;
  out << "\n";
  char num[32];
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    out << ids[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      std::snprintf(num, sizeof(num), "%.8g", rows(r, c));
      out << "," << num;
    }
    out << "\n";
  }
}

} // namespace ldseg
