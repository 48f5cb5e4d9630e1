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

#include "triage/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "triage/error.hpp"

namespace triage::features {

std::vector<KeywordList> parse_keyword_lists(std::string_view content) {
  std::vector<KeywordList> lists;
  std::set<ActionabilityType> seen_categories;
  std::set<std::string> seen_words;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (s.front() == '[') {
      const auto close = s.find(']');
      if (close == std::string_view::npos)
        throw DataError("keyword file line " + std::to_string(line_no) + ": unclosed header");
      std::string_view inner = text::trim(s.substr(1, close - 1));
      const auto space = inner.find_first_of(" \t");
      auto category = parse_actionability(inner.substr(0, space));
      if (!category && space != std::string_view::npos)
        category = parse_actionability(text::trim(inner.substr(space)));
      if (!category)
        throw DataError("keyword file line " + std::to_string(line_no) +
                        ": unknown category '" + std::string(inner) + "'");
      if (!seen_categories.insert(*category).second)
        throw DataError("keyword file line " + std::to_string(line_no) +
                        ": category listed twice");
      lists.push_back({*category, {}});
      seen_words.clear();
      s = text::trim(s.substr(close + 1));
      if (s.empty()) continue;
    }
    if (lists.empty())
      throw DataError("keyword file line " + std::to_string(line_no) +
                      ": keywords before the first [category] header");
    std::istringstream words{std::string(s)};
    std::string w;
    while (words >> w) {
      w = text::ascii_lower(w);
      if (seen_words.insert(w).second) lists.back().keywords.push_back(w);
    }
  }
  return lists;
}

std::vector<KeywordList> load_keyword_lists(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open keyword file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_keyword_lists(ss.str());
}

std::string format_keyword_lists(std::span<const KeywordList> lists) {
  std::string out;
  for (const auto& list : lists) {
    out += '[';
    out += code_of(list.category);
    out += ' ';
    out += name_of(list.category);
    out += "]\n";
    for (std::size_t i = 0; i < list.keywords.size(); ++i) {
      out += list.keywords[i];
      out += (i + 1 == list.keywords.size() || (i + 1) % 12 == 0) ? '\n' : ' ';
    }
    out += '\n';
  }
  return out;
}

std::vector<KeywordList> default_keyword_lists() {
  return parse_keyword_lists(
      "[D AccessibilityChange]\n"
      "accessibility street bridge blocked derailment collapse close flooded closed\n"
      "careful cancel cancelled canceled avoid alert affect advised\n"
      "[I PersonalOpinion]\n"
      "i people us all me please good will trump your pray praying toll concerned\n"
      "omg worried god\n");
}

const KeywordList* find_list(std::span<const KeywordList> lists, ActionabilityType category) {
  for (const auto& l : lists)
    if (l.category == category) return &l;
  return nullptr;
}

void FeatureConfig::validate() const {
  if (!(cutoff > 0.0 && cutoff < 1.0))
    throw InvalidArgument("feature cutoff must lie strictly between 0 and 1");
}

bool keyword_candidate(std::string_view token) {
  if (token.empty() || text::is_url(token)) return false;
  const auto c = static_cast<unsigned char>(token.front());
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

InducedKeywords induce_keywords(std::span<const TokenizedExample> corpus,
                                ActionabilityType category, const InductionOptions& options) {
  if (options.k == 0) throw InvalidArgument("induce_keywords: k must be at least 1");
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> counts;
  std::size_t n_pos = 0, n_neg = 0, docs_pos = 0, docs_neg = 0;
  for (const auto& ex : corpus) {
    const bool positive = ex.actions.contains(category);
    (positive ? docs_pos : docs_neg) += 1;
    for (const auto& tok : ex.tokens) {
      auto& c = counts[tok];
      if (positive) {
        ++c.first;
        ++n_pos;
      } else {
        ++c.second;
        ++n_neg;
      }
    }
  }
  if (docs_pos == 0 || docs_neg == 0)
    throw DataError(std::string("induce_keywords: category ") + std::string(name_of(category)) +
                    " needs positive and negative documents");

  const double vocab = static_cast<double>(counts.size());
  const double log_pos_total = std::log(static_cast<double>(n_pos) + vocab);
  const double log_neg_total = std::log(static_cast<double>(n_neg) + vocab);

  std::vector<KeywordScore> scored;
  for (const auto& [word, c] : counts) {
    if (c.first + c.second < options.min_count || !keyword_candidate(word)) continue;
    const double s = (std::log(static_cast<double>(c.first) + 1.0) - log_pos_total) -
                     (std::log(static_cast<double>(c.second) + 1.0) - log_neg_total);
    scored.push_back({word, s});
  }
  std::sort(scored.begin(), scored.end(), [](const KeywordScore& a, const KeywordScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.word < b.word;
  });

  InducedKeywords out;
  out.short_list = scored.size() < options.k;
  scored.resize(std::min(scored.size(), options.k));
  out.list.category = category;
  for (const auto& s : scored) out.list.keywords.push_back(s.word);
  out.ranked = std::move(scored);
  return out;
}

namespace {

std::optional<std::vector<double>> unit(std::span<const double> v) {
  double sq = 0;
  for (double x : v) sq += x * x;
  if (sq == 0) return std::nullopt;
  const double n = std::sqrt(sq);
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x /= n;
  return out;
}

}  // namespace

Vectorizer::Vectorizer(const KeywordList& keywords, const text::EmbeddingTable& table,
                       FeatureConfig config)
    : category_(keywords.category), table_(&table), config_(config) {
  config_.validate();
  keyword_vectors_.reserve(keywords.keywords.size());
  for (const auto& kw : keywords.keywords) {
    auto v = table.lookup(kw);
    auto u = v ? unit(*v) : std::nullopt;
    if (!u) {
      diagnostics_.missing_keywords.push_back(kw);
      keyword_vectors_.emplace_back();
    } else {
      keyword_vectors_.push_back(std::move(*u));
    }
  }
}

FeatureVector Vectorizer::operator()(const text::TokenSequence& tokens) const {
  if (tokens.empty()) throw InvalidArgument("vectorize: empty document");
  FeatureVector fv;
  fv.category = category_;
  fv.values.assign(keyword_vectors_.size(), 0.0);

  std::size_t embedded = 0;
  for (const auto& tok : tokens) {
    auto v = table_->lookup(tok);
    if (!v) continue;
    ++embedded;
    double sq = 0;
    for (double x : *v) sq += x * x;
    if (sq == 0) continue;
    const double norm = std::sqrt(sq);
    for (std::size_t j = 0; j < keyword_vectors_.size(); ++j) {
      const auto& kv = keyword_vectors_[j];
      if (kv.empty()) continue;
      double dot = 0;
      for (std::size_t d = 0; d < kv.size(); ++d) dot += kv[d] * (*v)[d];
      const double sim = std::clamp(dot / norm, -1.0, 1.0);
      if (sim >= config_.cutoff) fv.values[j] += sim;
    }
  }
  const std::size_t denom =
      config_.denominator == DenominatorPolicy::AllTokens ? tokens.size() : embedded;
  if (denom == 0) return fv;
  for (auto& x : fv.values) x /= static_cast<double>(denom);
  return fv;
}

FeatureVector vectorize(const text::TokenSequence& tokens, const KeywordList& keywords,
                        const text::EmbeddingTable& table, const FeatureConfig& config,
                        VectorizeDiagnostics* diagnostics) {
  Vectorizer v(keywords, table, config);
  if (diagnostics) *diagnostics = v.diagnostics();
  return v(tokens);
}

}  // namespace triage::features
