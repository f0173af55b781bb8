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
#include <utility>

namespace ldseg {

/// Fills the fixed conversation template. user_text carries the system
/// preamble, the image placeholder and the USER turn, ending with
/// "ASSISTANT:"; target_text is the reference ASSISTANT reply ending with
/// the segmentation token. Throws ValueError on empty arguments.
std::pair<std::string, std::string> render_prompt(const std::string& class_name, const std::string& modality);

} // namespace ldseg
