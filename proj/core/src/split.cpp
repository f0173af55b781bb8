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
#include "ldseg/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ldseg/errors.hpp"
#include "ldseg/rng.hpp"

namespace ldseg {

std::array<std::size_t, 3> apportion(std::size_t total, const SplitRatios& ratios) {
  const std::array<double, 3> r{ratios.train, ratios.tune, ratios.validation};
  std::array<std::size_t, 3> out{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double quota = static_cast<double>(total) * r[i];
    out[i] = static_cast<std::size_t>(std::floor(quota));
    remainder[i] = quota - std::floor(quota);
    assigned += out[i];
  }
  // Largest remainder first; bucket order breaks ties.
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) out[order[k % 3]] += 1;
  return out;
}

DatasetManifest grouped_split(const DatasetManifest& manifest, const SplitRatios& ratios, std::uint64_t seed) {
  const std::array<double, 3> r{ratios.train, ratios.tune, ratios.validation};
  for (double v : r)
    if (v < 0.0) throw ValueError("split ratios must be non-negative");
  const double sum = r[0] + r[1] + r[2];
  if (std::abs(sum - 1.0) > 1e-9) throw ValueError("split ratios must sum to 1");
  if (r[0] <= 0.0) throw ValueError("train ratio must be positive");

  std::set<std::string> scan_set;
  for (const auto& rec : manifest.records) scan_set.insert(rec.scan_id);
  std::vector<std::string> scans(scan_set.begin(), scan_set.end());

  std::size_t nonzero_buckets = 0;
  for (double v : r) nonzero_buckets += v > 0.0 ? 1 : 0;
  if (scans.size() < nonzero_buckets)
    throw ValueError("fewer distinct scans (" + std::to_string(scans.size()) + ") than nonzero ratio buckets (" +
                     std::to_string(nonzero_buckets) + ")");

  Rng rng(seed);
  rng.shuffle(scans);

  const auto counts = apportion(scans.size(), ratios);
  std::map<std::string, Split> assignment;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < counts[0]; ++i) assignment[scans[idx++]] = Split::kTrain;
  for (std::size_t i = 0; i < counts[1]; ++i) assignment[scans[idx++]] = Split::kTune;
  for (std::size_t i = 0; i < counts[2]; ++i) assignment[scans[idx++]] = Split::kValidation;

  DatasetManifest out = manifest;
  out.seed = seed;
  for (auto& rec : out.records) rec.split = assignment.at(rec.scan_id);
  out.recount();
  return out;
}

} // namespace ldseg
