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
#include <unordered_map>
#include <vector>

namespace ldseg {

/// The marker tokens of the conversation protocol.
struct SpecialVocab {
  std::string seg = "[SEG]";
  std::string image = "<image>";
  std::string phrase_open = "<p>";
  std::string phrase_close = "</p>";
  std::string pad = "<pad>";
  std::string unk = "<unk>";
  std::string bos = "<bos>";
  std::string eos = "<eos>";
};

/// Word-level tokenizer. Words are whitespace-separated; marker tokens are
/// split out of words so "[SEG]." becomes ["[SEG]", "."]. Decoding joins
/// with single spaces and re-attaches bare punctuation to the previous word.
class Tokenizer {
public:
  /// Builds a vocabulary from raw texts (templates plus corpus words).
  /// Token ids are stable: specials first, then sorted unique words.
  static Tokenizer build(const std::vector<std::string>& texts);

  static Tokenizer from_tokens(std::vector<std::string> tokens);

  /// One token per line, UTF-8.
  void save(const std::string& path) const;
  static Tokenizer load(const std::string& path);

  std::vector<int> encode(const std::string& text) const;
  std::string decode(const std::vector<int>& ids) const;

  /// Splits a string into token strings without mapping to ids.
  static std::vector<std::string> split_words(const std::string& text);

  int id_of(const std::string& token) const; // unk id when absent
  const std::string& token(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }

  const SpecialVocab& specials() const { return specials_; }
  int pad_id() const { return pad_id_; }
  int unk_id() const { return unk_id_; }
  int bos_id() const { return bos_id_; }
  int eos_id() const { return eos_id_; }
  int image_id() const { return image_id_; }
  int seg_id() const { return seg_id_; }

  const std::vector<std::string>& tokens() const { return tokens_; }

private:
  void index_specials();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
  SpecialVocab specials_;
  int pad_id_ = 0, unk_id_ = 0, bos_id_ = 0, eos_id_ = 0, image_id_ = 0, seg_id_ = 0;
};

} // namespace ldseg
