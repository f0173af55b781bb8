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
#include "ldseg/prompts.hpp"

#include "ldseg/errors.hpp"

namespace ldseg {

std::pair<std::string, std::string> render_prompt(const std::string& class_name, const std::string& modality) {
  if (class_name.empty()) throw ValueError("render_prompt: class name must be non-empty");
  if (modality.empty()) throw ValueError("render_prompt: modality must be non-empty");

  const std::string user_text =
      "A chat between a curious human and an artificial intelligence assistant. "
      "The assistant gives helpful, detailed, and polite answers to the human's questions. "
      "<image> USER: Can you segment the " +
      class_name + " in this " + modality + " image? ASSISTANT:";
  const std::string target_text =
      "This is a <p> " + modality + " </p> image. The image contains <p> " + class_name + " </p> [SEG].";
  return {user_text, target_text};
}

} // namespace ldseg
