// Copyright 2026 The Triage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace triage::text {

std::string_view trim(std::string_view s);
std::string ascii_lower(std::string_view s);

using TokenSequence = std::vector<std::string>;

// Rule-based social media tokenizer. Hashtags, @-mentions, URLs and common
// emoticons come out as single tokens; everything else splits on whitespace
// and punctuation. Runs of one punctuation character ("!!!", "...") stay
// together, as do apostrophes, hyphens and digit separators inside words.
// All tokens are ASCII-lowercased except URLs.
TokenSequence tokenize(std::string_view text);

bool is_url(std::string_view token);
bool is_mention(std::string_view token);
bool is_hashtag(std::string_view token);

// Character alphabet for the convolutional model. Index 0 is reserved for
// padding and out-of-alphabet characters, symbols are numbered from 1.
class Alphabet {
 public:
  explicit Alphabet(std::string symbols);

  // a-z, 0-9, space and twenty common ASCII punctuation marks.
  static Alphabet standard();

  const std::string& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  std::uint16_t index(char32_t c) const;

 private:
  std::string symbols_;
  std::array<std::uint16_t, 128> lookup_{};
};

using CharSequence = std::vector<std::uint16_t>;

inline constexpr std::size_t kDefaultMaxLen = 280;

// Lowercases, maps each code point to its alphabet index (0 when unknown) and
// truncates or zero-pads to exactly max_len entries.
CharSequence quantize_chars(std::string_view text, const Alphabet& alphabet,
                            std::size_t max_len = kDefaultMaxLen);

// Word -> dense vector mapping. Keys are stored lowercased; the first entry
// for a word wins.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 25);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }

  // Returns false if the (lowercased) word is already present.
  bool add(std::string_view word, std::span<const double> vector);

  std::optional<std::span<const double>> lookup(std::string_view word) const;
  bool contains(std::string_view word) const { return lookup(word).has_value(); }

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> values_;
};

// Reads the plain-text vector format: one "word v1 ... vd" entry per line.
// A leading "count dimension" header line, as written by word2vec, is skipped.
// Throws DataError naming the line on a wrong component count or a
// non-numeric component.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::size_t expected_dimension = 25);

// dot(u, v) / (|u| |v|), clamped to [-1, 1]. Throws InvalidArgument on a
// dimension mismatch or a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

}  // namespace triage::text
