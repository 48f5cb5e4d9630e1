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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "triage/error.hpp"
#include "triage/types.hpp"

namespace triage::corpus {

struct LabeledMessage {
  Message message;
  BinaryInformativeness label = BinaryInformativeness::NotInformative;
};

using LabeledSet = std::vector<LabeledMessage>;

struct ActionLabeledMessage {
  Message message;
  ActionSet actions;
};

// Records that parsed, plus one entry per record that did not. Loaders keep
// going past bad records.
template <typename T>
struct LoadResult {
  std::vector<T> records;
  std::vector<RecordError> errors;
};

// Maps raw label strings of a labeled collection onto the binary scheme.
// Exact (case-insensitive) table entries are tried first; otherwise a label
// mentioning "informative" is Informative unless the word is negated
// ("not informative", "non-informative", "uninformative").
class LabelMap {
 public:
  static LabelMap standard();
  // One "raw label = informative|not" entry per line; '#' starts a comment.
  static LabelMap load(const std::filesystem::path& path);

  void set(std::string_view raw, BinaryInformativeness value);
  std::optional<BinaryInformativeness> map(std::string_view raw) const;

 private:
  std::unordered_map<std::string, BinaryInformativeness> table_;
};

// CrisisLex-style CSV: header row, quoted fields, columns for tweet id, tweet
// text and label. Columns are located by header name. Throws DataError when
// the file cannot be read or more than half of its rows are malformed.
LoadResult<LabeledMessage> load_crisislex_csv(
    const std::filesystem::path& path,
    const LabelMap& labels = LabelMap::standard(),
    Source source = Source::CrisisLex);

// Line-delimited JSON messages: id, text, optional timestamp and source.
LoadResult<Message> load_jsonl(const std::filesystem::path& path);

// One line of such a file; nullopt with `error` set for a bad record.
std::optional<Message> parse_message_line(std::string_view line, std::string& error);

// As load_jsonl, plus a required "label" key (three-level or binary names;
// three-level labels are collapsed).
LoadResult<LabeledMessage> load_labeled_jsonl(const std::filesystem::path& path);

// As load_jsonl, plus a required "actions" array of category codes or names.
LoadResult<ActionLabeledMessage> load_action_jsonl(
    const std::filesystem::path& path);

struct Judgment {
  std::string message_id;
  std::string worker_id;
  InformativenessLabel label = InformativenessLabel::NotInformative;
};

// Line-delimited records with message_id, worker_id and label.
LoadResult<Judgment> load_judgments(const std::filesystem::path& path);

// Majority label. Ties go to the more informative label. Throws
// InvalidArgument on an empty list.
InformativenessLabel adjudicate(std::span<const InformativenessLabel> judgments);

struct AgreementReport {
  double overall = 0;  // matching judgments / all judgments
  std::map<InformativenessLabel, double> per_category;  // keyed by adjudicated label
  std::size_t messages = 0;
};

// Fraction of judgments that match their message's adjudicated label. Every
// message needs at least two judgments.
AgreementReport agreement(
    const std::map<std::string, std::vector<InformativenessLabel>>& by_message);

using GoldAnswerValue = std::variant<InformativenessLabel, ActionSet>;

struct GoldQuestion {
  std::string message_id;
  GoldAnswerValue correct;
};

struct GoldAnswer {
  std::string message_id;
  std::string worker_id;
  GoldAnswerValue answer;
};

struct GoldScore {
  double accuracy = 0;
  std::size_t answered = 0;
  bool flagged = false;
};

inline constexpr double kDefaultGoldThreshold = 0.7;

// Fraction of the gold questions this worker answered correctly; flagged when
// below threshold. Throws DataError if the worker answered none.
GoldScore score_gold(std::string_view worker_id,
                     std::span<const GoldQuestion> gold,
                     std::span<const GoldAnswer> answers,
                     double threshold = kDefaultGoldThreshold);

struct Adjudication {
  std::map<std::string, InformativenessLabel> labels;
  std::map<std::string, GoldScore> worker_scores;
  std::set<std::string> excluded_workers;
  AgreementReport agreement;
};

// Scores workers on the gold questions contained in `judgments`, drops the
// flagged workers, then adjudicates the remaining non-gold messages. Workers
// who saw no gold question are kept. Duplicate (message, worker) pairs throw.
Adjudication adjudicate_judgments(std::span<const Judgment> judgments,
                                  std::span<const GoldQuestion> gold,
                                  double threshold = kDefaultGoldThreshold);

// True for "RT @..." after trimming, case-insensitive.
bool is_retweet(std::string_view text);

// Lowercased token set used for near-duplicate detection; URLs and mentions
// are dropped.
std::vector<std::string> dedupe_tokens(std::string_view text);

inline constexpr double kNearDuplicateJaccard = 0.8;

// Indices of the messages that survive retweet and near-duplicate removal.
// When every message carries a timestamp the earliest message of a duplicate
// group survives, otherwise the first in input order. Output indices are
// ascending.
std::vector<std::size_t> dedupe_indices(std::span<const Message> messages);
MessageSet dedupe(std::span<const Message> messages);

BinaryInformativeness collapse_labels(InformativenessLabel label);

struct SplitOptions {
  std::size_t ccsid_validation = 300;
  std::size_t crisislex_per_class = 150;
};

struct Split {
  LabeledSet train;
  LabeledSet validation;
  double scale = 1.0;  // < 1 when the corpora were too small for full quotas
};

// Validation = ccsid_validation CCSID messages plus crisislex_per_class of
// each CrisisLex class, sampled without replacement; train = the rest. When a
// pool is short, all quotas shrink by one common factor so that no pool gives
// up more than half its messages. Throws DataError naming the class whose pool
// cannot cover even one message.
Split build_split(const LabeledSet& ccsid, const LabeledSet& crisislex,
                  std::uint64_t seed, const SplitOptions& options = {});

}  // namespace triage::corpus
