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

#include <string>

#include "ldseg/types.hpp"

namespace ldseg {

/// HTTP describer endpoint. Wire protocol: POST with JSON body
/// {"image_b64": <png bytes>, "prompt": <string>}; JSON reply {"text": ...}.
struct RemoteDescriberConfig {
  std::string endpoint;          // e.g. http://127.0.0.1:8080/describe
  double timeout_seconds = 10.0; // > 0
  int retries = 2;               // >= 0, additional attempts after the first
  std::string prompt_template =
      "Describe the shapes and relative positions of all the colored regions "
      "in this image. The highlighted structures are: {categories}.";

  void validate() const;
};

struct RemoteOutcome {
  std::string text;
  std::string provenance; // "remote" when served, "fallback" otherwise
};

/// Sends the colored mask to the endpoint and returns its text verbatim.
/// Timeouts, non-2xx statuses and malformed replies are retried
/// `config.retries` times, after which `fallback_text` is returned with
/// provenance "fallback".
RemoteOutcome remote_describe(const RgbImage& colored, const RemoteDescriberConfig& config,
                              const std::string& fallback_text, const std::string& categories = "");

} // namespace ldseg
