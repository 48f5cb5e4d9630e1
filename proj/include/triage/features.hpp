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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triage/text.hpp"
#include "triage/types.hpp"

namespace triage::features {

struct KeywordList {
  ActionabilityType category = ActionabilityType::Needs;
  std::vector<std::string> keywords;  // lowercase, no duplicates
};

// Editable keyword file: a "[code name]" header per category followed by
// whitespace-separated keywords, e.g.
//
//   [D AccessibilityChange]
//   accessibility street bridge blocked
//
// Lines starting with '#' are comments.
std::vector<KeywordList> parse_keyword_lists(std::string_view content);
std::vector<KeywordList> load_keyword_lists(const std::filesystem::path& path);
std::string format_keyword_lists(std::span<const KeywordList> lists);

// The two published sample lists (personal opinion and changes in
// accessibility).
std::vector<KeywordList> default_keyword_lists();

const KeywordList* find_list(std::span<const KeywordList> lists, ActionabilityType category);

enum class DenominatorPolicy { AllTokens, EmbeddedTokensOnly };

struct FeatureConfig {
  double cutoff = 0.45;
  DenominatorPolicy denominator = DenominatorPolicy::AllTokens;

  void validate() const;  // throws InvalidArgument unless 0 < cutoff < 1
};

struct FeatureVector {
  ActionabilityType category = ActionabilityType::Needs;
  std::vector<double> values;  // one per keyword, each in [0, 1]
};

struct TokenizedExample {
  text::TokenSequence tokens;
  ActionSet actions;
};

struct InductionOptions {
  std::size_t k = 18;
  std::size_t min_count = 3;
};

struct KeywordScore {
  std::string word;
  double score = 0;
};

struct InducedKeywords {
  KeywordList list;
  std::vector<KeywordScore> ranked;  // the selected keywords with their scores
  bool short_list = false;           // fewer than k eligible tokens
};

// Tokens that may become keywords: they start with an ASCII letter or digit
// and are not URLs.
bool keyword_candidate(std::string_view token);

// Ranks candidate tokens by the add-one smoothed log-likelihood ratio
//   log((c_pos(w) + 1) / (N_pos + V)) - log((c_neg(w) + 1) / (N_neg + V))
// where c are token counts inside positive/negative documents, N the total
// token counts of each side and V the corpus vocabulary size. Tokens seen
// fewer than min_count times are skipped; ties break alphabetically.
InducedKeywords induce_keywords(std::span<const TokenizedExample> corpus,
                                ActionabilityType category,
                                const InductionOptions& options = {});

struct VectorizeDiagnostics {
  std::vector<std::string> missing_keywords;
};

// Precomputed keyword side of the feature extraction for one category. For
// keyword j the feature is (1/N) * sum of cosine(token, keyword_j) over the
// document tokens whose cosine reaches the cutoff. Tokens without an
// embedding never reach the cutoff; N counts them unless the policy is
// EmbeddedTokensOnly.
class Vectorizer {
 public:
  Vectorizer(const KeywordList& keywords, const text::EmbeddingTable& table,
             FeatureConfig config = {});

  ActionabilityType category() const { return category_; }
  std::size_t dimension() const { return keyword_vectors_.size(); }
  const FeatureConfig& config() const { return config_; }
  const VectorizeDiagnostics& diagnostics() const { return diagnostics_; }

  // Throws InvalidArgument on an empty document.
  FeatureVector operator()(const text::TokenSequence& tokens) const;

 private:
  ActionabilityType category_;
  const text::EmbeddingTable* table_;
  FeatureConfig config_;
  // Unit-normalized keyword vectors; empty when the keyword has no usable
  // embedding.
  std::vector<std::vector<double>> keyword_vectors_;
  VectorizeDiagnostics diagnostics_;
};

FeatureVector vectorize(const text::TokenSequence& tokens, const KeywordList& keywords,
                        const text::EmbeddingTable& table, const FeatureConfig& config = {},
                        VectorizeDiagnostics* diagnostics = nullptr);

}  // namespace triage::features
