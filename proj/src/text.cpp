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

#include "triage/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "triage/error.hpp"

namespace triage::text {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Non-ASCII bytes are treated as word material so UTF-8 words pass through.
bool is_word_char(unsigned char c) { return is_alnum(c) || c == '_' || c >= 0x80; }

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char a = s[i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a + 32);
    if (a != prefix[i]) return false;
  }
  return true;
}

constexpr std::string_view kEyes = ":;=";
constexpr std::string_view kNoses = "-o^'";
constexpr std::string_view kMouths = ")(][dDpP/\\|*3@oO";
constexpr std::string_view kReverseMouths = ")(][";

bool contains(std::string_view set, char c) {
  return set.find(c) != std::string_view::npos;
}

// Length of an emoticon starting at s[0], or 0.
std::size_t match_emoticon(std::string_view s) {
  auto boundary_after = [&](std::size_t n) {
    return n == s.size() || !is_alnum(static_cast<unsigned char>(s[n]));
  };
  for (std::string_view fixed : {"<3", "^_^", "-_-", "o_o", "^^"}) {
    if (s.substr(0, fixed.size()) == fixed && boundary_after(fixed.size()))
      return fixed.size();
  }
  if (s.empty()) return 0;
  // eyes [nose] mouth+
  if (contains(kEyes, s[0])) {
    std::size_t n = 1;
    if (n < s.size() && contains(kNoses, s[n]) && n + 1 < s.size() &&
        contains(kMouths, s[n + 1]))
      ++n;
    if (n < s.size() && contains(kMouths, s[n])) {
      const char mouth = s[n];
      ++n;
      while (n < s.size() && s[n] == mouth) ++n;
      if (boundary_after(n)) return n;
    }
    return 0;
  }
  // reversed: mouth [nose] eyes, e.g. "(:" or "(-:"
  if (contains(kReverseMouths, s[0])) {
    std::size_t n = 1;
    if (n < s.size() && s[n] == '-') ++n;
    if (n < s.size() && contains(kEyes, s[n]) && boundary_after(n + 1))
      return n + 1;
  }
  return 0;
}

void push_lower(TokenSequence& out, std::string_view token) {
  out.push_back(ascii_lower(token));
}

void tokenize_chunk(std::string_view chunk, TokenSequence& out) {
  std::size_t i = 0;
  while (i < chunk.size()) {
    const std::string_view rest = chunk.substr(i);
    const auto c = static_cast<unsigned char>(chunk[i]);

    if (starts_with_ci(rest, "http://") || starts_with_ci(rest, "https://") ||
        starts_with_ci(rest, "www.")) {
      std::size_t end = rest.size();
      while (end > 0 && contains(".,!?;:)\"'", rest[end - 1])) --end;
      out.emplace_back(rest.substr(0, end));
      i += end;
      continue;
    }

    const bool at_boundary =
        i == 0 || !is_alnum(static_cast<unsigned char>(chunk[i - 1]));
    if (at_boundary) {
      if (std::size_t n = match_emoticon(rest); n > 0) {
        push_lower(out, rest.substr(0, n));
        i += n;
        continue;
      }
    }

    if ((c == '#' || c == '@') && rest.size() > 1 &&
        is_word_char(static_cast<unsigned char>(rest[1]))) {
      std::size_t n = 1;
      while (n < rest.size() && is_word_char(static_cast<unsigned char>(rest[n])))
        ++n;
      push_lower(out, rest.substr(0, n));
      i += n;
      continue;
    }

    if (is_word_char(c)) {
      std::size_t n = 1;
      while (n < rest.size()) {
        const auto d = static_cast<unsigned char>(rest[n]);
        if (is_word_char(d)) {
          ++n;
          continue;
        }
        // Joiners kept inside a word: don't, well-known, 1,000, 3.5
        const bool next_is_word =
            n + 1 < rest.size() &&
            is_word_char(static_cast<unsigned char>(rest[n + 1]));
        if ((d == '\'' || d == '-') && next_is_word) {
          n += 2;
          continue;
        }
        if ((d == '.' || d == ',') && n + 1 < rest.size() &&
            is_digit(static_cast<unsigned char>(rest[n - 1])) &&
            is_digit(static_cast<unsigned char>(rest[n + 1]))) {
          n += 2;
          continue;
        }
        break;
      }
      push_lower(out, rest.substr(0, n));
      i += n;
      continue;
    }

    std::size_t n = 1;
    while (n < rest.size() && rest[n] == rest[0]) ++n;
    push_lower(out, rest.substr(0, n));
    i += n;
  }
}

}  // namespace

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out)
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch + 32);
  return out;
}

TokenSequence tokenize(std::string_view text) {
  TokenSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) tokenize_chunk(text.substr(i, j - i), out);
    i = j;
  }
  return out;
}

bool is_url(std::string_view token) {
  return starts_with_ci(token, "http://") || starts_with_ci(token, "https://") ||
         starts_with_ci(token, "www.");
}

bool is_mention(std::string_view token) {
  return token.size() > 1 && token[0] == '@';
}

bool is_hashtag(std::string_view token) {
  return token.size() > 1 && token[0] == '#';
}

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InvalidArgument("alphabet must not be empty");
  if (symbols_.size() > 127) throw InvalidArgument("alphabet too large");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const auto c = static_cast<unsigned char>(symbols_[i]);
    if (c >= 128) throw InvalidArgument("alphabet symbols must be ASCII");
    if (lookup_[c] == 0) lookup_[c] = static_cast<std::uint16_t>(i + 1);
  }
}

Alphabet Alphabet::standard() {
  return Alphabet("abcdefghijklmnopqrstuvwxyz0123456789 .,!?'\":;-()@#/&$%*+_");
}

std::uint16_t Alphabet::index(char32_t c) const {
  return c < 128 ? lookup_[c] : 0;
}

CharSequence quantize_chars(std::string_view text, const Alphabet& alphabet,
                            std::size_t max_len) {
  if (max_len == 0) throw InvalidArgument("max_len must be positive");
  CharSequence out(max_len, 0);
  std::size_t pos = 0;
  std::size_t i = 0;
  while (i < text.size() && pos < max_len) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      const char32_t lower = (c >= 'A' && c <= 'Z') ? c + 32 : c;
      out[pos++] = alphabet.index(lower);
      ++i;
      continue;
    }
    // One slot per UTF-8 code point; all of them are out-of-alphabet.
    std::size_t len = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : (c >= 0xC0) ? 2 : 1;
    out[pos++] = 0;
    i += len;
  }
  return out;
}

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InvalidArgument("embedding dimension must be positive");
}

bool EmbeddingTable::add(std::string_view word, std::span<const double> vector) {
  if (vector.size() != dimension_)
    throw InvalidArgument("embedding has " + std::to_string(vector.size()) +
                          " components, expected " + std::to_string(dimension_));
  auto [it, inserted] = index_.try_emplace(ascii_lower(word), index_.size());
  if (!inserted) return false;
  values_.insert(values_.end(), vector.begin(), vector.end());
  return true;
}

std::optional<std::span<const double>> EmbeddingTable::lookup(
    std::string_view word) const {
  auto it = index_.find(ascii_lower(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(values_.data() + it->second * dimension_,
                                 dimension_);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::size_t expected_dimension) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings file " + path.string());

  EmbeddingTable table(expected_dimension);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;

    std::vector<std::string_view> fields;
    while (!rest.empty()) {
      std::size_t n = 0;
      while (n < rest.size() && !is_space(static_cast<unsigned char>(rest[n]))) ++n;
      fields.push_back(rest.substr(0, n));
      rest = trim(rest.substr(n));
    }

    if (line_no == 1 && fields.size() == 2 && expected_dimension != 1) {
      long a = 0, b = 0;
      auto r1 = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), a);
      auto r2 = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), b);
      if (r1.ec == std::errc{} && r2.ec == std::errc{} &&
          r1.ptr == fields[0].data() + fields[0].size() &&
          r2.ptr == fields[1].data() + fields[1].size())
        continue;
    }

    if (fields.size() - 1 != expected_dimension)
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(expected_dimension) + " components, found " +
                      std::to_string(fields.size() - 1));
    values.clear();
    for (std::size_t k = 1; k < fields.size(); ++k) {
      double v = 0;
      const auto f = fields[k];
      auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size() || !std::isfinite(v))
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": non-numeric component '" + std::string(f) + "'");
      values.push_back(v);
    }
    table.add(fields[0], values);
  }
  return table;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw InvalidArgument("cosine: dimension mismatch");
  double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0 || vv == 0) throw InvalidArgument("cosine: zero vector");
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

}  // namespace triage::text
