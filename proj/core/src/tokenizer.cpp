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
#include "ldseg/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ldseg/errors.hpp"

namespace ldseg {
namespace {

const std::vector<std::string>& marker_tokens() {
  static const std::vector<std::string> markers{"<image>", "[SEG]", "<p>", "</p>"};
  return markers;
}

bool is_bare_punct(const std::string& t) {
  return t.size() == 1 && (t == "." || t == "," || t == "?" || t == "!" || t == ":" || t == ";");
}

// Splits one whitespace-free word into pieces so marker tokens stand alone.
void split_markers(const std::string& word, std::vector<std::string>& out) {
  std::size_t best_pos = std::string::npos;
  std::size_t best_len = 0;
  for (const auto& m : marker_tokens()) {
    const std::size_t pos = word.find(m);
    if (pos != std::string::npos && (pos < best_pos || (pos == best_pos && m.size() > best_len))) {
      best_pos = pos;
      best_len = m.size();
    }
  }
  if (best_pos == std::string::npos) {
    if (!word.empty()) out.push_back(word);
    return;
  }
  if (best_pos > 0) split_markers(word.substr(0, best_pos), out);
  out.push_back(word.substr(best_pos, best_len));
  if (best_pos + best_len < word.size()) split_markers(word.substr(best_pos + best_len), out);
}

} // namespace

std::vector<std::string> Tokenizer::split_words(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string word;
  while (in >> word) {
    // Marker splitting turns "[SEG]." into ["[SEG]", "."]; ordinary words
    // keep their punctuation ("image?" is one token).
    std::vector<std::string> pieces;
    split_markers(word, pieces);
    for (auto& p : pieces) out.push_back(std::move(p));
  }
  return out;
}

Tokenizer Tokenizer::build(const std::vector<std::string>& texts) {
  SpecialVocab sp;
  std::vector<std::string> toks{sp.pad, sp.unk, sp.bos, sp.eos, sp.image, sp.seg, sp.phrase_open, sp.phrase_close};
  std::set<std::string> fixed(toks.begin(), toks.end());
  std::set<std::string> words;
  for (const auto& t : texts)
    for (auto& w : split_words(t))
      if (!fixed.count(w)) words.insert(w);
  toks.insert(toks.end(), words.begin(), words.end());
  return from_tokens(std::move(toks));
}

Tokenizer Tokenizer::from_tokens(std::vector<std::string> tokens) {
  Tokenizer tk;
  tk.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < tk.tokens_.size(); ++i) {
    if (!tk.ids_.emplace(tk.tokens_[i], static_cast<int>(i)).second)
      throw ValueError("duplicate token in vocabulary: " + tk.tokens_[i]);
  }
  tk.index_specials();
  return tk;
}

void Tokenizer::index_specials() {
  auto need = [&](const std::string& t) {
    auto it = ids_.find(t);
    if (it == ids_.end()) throw ValueError("vocabulary is missing special token " + t);
    return it->second;
  };
  pad_id_ = need(specials_.pad);
  unk_id_ = need(specials_.unk);
  bos_id_ = need(specials_.bos);
  eos_id_ = need(specials_.eos);
  image_id_ = need(specials_.image);
  seg_id_ = need(specials_.seg);
  need(specials_.phrase_open);
  need(specials_.phrase_close);
}

void Tokenizer::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& t : tokens_) out << t << "\n";
}

Tokenizer Tokenizer::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<std::string> toks;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) toks.push_back(line);
  return from_tokens(std::move(toks));
}

std::vector<int> Tokenizer::encode(const std::string& text) const {
  std::vector<int> ids;
  for (const auto& w : split_words(text)) ids.push_back(id_of(w));
  return ids;
}

std::string Tokenizer::decode(const std::vector<int>& ids) const {
  std::string out;
  for (int id : ids) {
    const std::string& t = token(id);
    if (!out.empty() && !is_bare_punct(t)) out += " ";
    out += t;
  }
  return out;
}

int Tokenizer::id_of(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? unk_id_ : it->second;
}

const std::string& Tokenizer::token(int id) const {
  if (id < 0 || id >= size()) throw ValueError("token id out of range: " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

} // namespace ldseg
