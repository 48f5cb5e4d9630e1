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

#include "triage/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "triage/random.hpp"
#include "triage/text.hpp"

namespace triage::corpus {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string content = ss.str();
  if (content.rfind("\xEF\xBB\xBF", 0) == 0) content.erase(0, 3);
  return content;
}

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
  bool unterminated = false;
};

// RFC 4180 reader: quoted fields may hold separators, doubled quotes and
// newlines.
std::vector<CsvRecord> parse_csv(std::string_view data) {
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < data.size()) {
    CsvRecord rec;
    rec.line = line;
    std::string field;
    bool in_quotes = false;
    bool done = false;
    while (!done) {
      if (i >= data.size()) {
        rec.unterminated = in_quotes;
        rec.fields.push_back(std::move(field));
        break;
      }
      const char c = data[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < data.size() && data[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            in_quotes = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        continue;
      }
      switch (c) {
        case '"':
          in_quotes = true;
          ++i;
          break;
        case ',':
          rec.fields.push_back(std::move(field));
          field.clear();
          ++i;
          break;
        case '\r':
          ++i;
          break;
        case '\n':
          ++line;
          ++i;
          rec.fields.push_back(std::move(field));
          done = true;
          break;
        default:
          field.push_back(c);
          ++i;
      }
    }
    const bool blank = rec.fields.size() == 1 && text::trim(rec.fields[0]).empty();
    if (!blank) records.push_back(std::move(rec));
  }
  return records;
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::initializer_list<std::string_view> exact,
                                       std::initializer_list<std::string_view> partial) {
  std::vector<std::string> names;
  for (const auto& h : header) names.push_back(text::ascii_lower(text::trim(h)));
  for (auto want : exact)
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == want) return i;
  for (auto want : partial)
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i].find(want) != std::string::npos) return i;
  return std::nullopt;
}

void check_malformed_ratio(const std::filesystem::path& path, std::size_t good,
                           std::size_t bad) {
  if (bad > 0 && 2 * bad > good + bad)
    throw DataError(path.string() + ": " + std::to_string(bad) + " of " +
                    std::to_string(good + bad) + " records malformed");
}

// Shared field extraction for the line-delimited loaders.
std::optional<Message> message_from_json(const json& j, std::string& error) {
  if (!j.is_object()) {
    error = "record is not an object";
    return std::nullopt;
  }
  Message m;
  auto id = j.find("id");
  if (id == j.end() || !(id->is_string() || id->is_number_integer())) {
    error = "missing id";
    return std::nullopt;
  }
  m.id = id->is_string() ? id->get<std::string>() : std::to_string(id->get<long long>());
  auto txt = j.find("text");
  if (txt == j.end() || !txt->is_string()) {
    error = "missing text";
    return std::nullopt;
  }
  m.text = txt->get<std::string>();
  if (text::trim(m.text).empty()) {
    error = "empty text";
    return std::nullopt;
  }
  if (auto ts = j.find("timestamp"); ts != j.end() && !ts->is_null()) {
    if (!ts->is_number_integer()) {
      error = "timestamp must be integer seconds";
      return std::nullopt;
    }
    m.timestamp = ts->get<std::int64_t>();
  }
  if (auto src = j.find("source"); src != j.end() && src->is_string())
    m.source = parse_source(src->get<std::string>());
  return m;
}

// Calls `handle(json, line_no, error)` for each non-blank line; handle returns
// false (and fills error) for a bad record.
template <typename T, typename Handler>
LoadResult<T> load_lines(const std::filesystem::path& path, Handler handle) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  LoadResult<T> result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    std::string error;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      result.errors.push_back({line_no, "invalid JSON"});
      continue;
    }
    std::optional<T> rec = handle(j, error);
    if (rec)
      result.records.push_back(std::move(*rec));
    else
      result.errors.push_back({line_no, error});
  }
  return result;
}

template <typename T, typename IdOf>
void drop_duplicate_ids(LoadResult<T>& result, IdOf id_of) {
  std::unordered_set<std::string> seen;
  std::vector<T> kept;
  kept.reserve(result.records.size());
  for (auto& r : result.records) {
    if (!seen.insert(id_of(r)).second) {
      result.errors.push_back({0, "duplicate id " + id_of(r)});
      continue;
    }
    kept.push_back(std::move(r));
  }
  result.records = std::move(kept);
}

}  // namespace

LabelMap LabelMap::standard() {
  LabelMap m;
  using B = BinaryInformativeness;
  m.set("informative", B::Informative);
  m.set("related and informative", B::Informative);
  m.set("not informative", B::NotInformative);
  m.set("non-informative", B::NotInformative);
  m.set("related - but not informative", B::NotInformative);
  m.set("related but not informative", B::NotInformative);
  m.set("not related", B::NotInformative);
  m.set("not applicable", B::NotInformative);
  return m;
}

LabelMap LabelMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label map " + path.string());
  LabelMap m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = text::trim(s);
    if (s.empty()) continue;
    const auto eq = s.rfind('=');
    if (eq == std::string_view::npos)
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 'label = value'");
    auto value = parse_binary_informativeness(s.substr(eq + 1));
    if (!value)
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": unknown value");
    m.set(text::trim(s.substr(0, eq)), *value);
  }
  return m;
}

void LabelMap::set(std::string_view raw, BinaryInformativeness value) {
  table_[text::ascii_lower(text::trim(raw))] = value;
}

std::optional<BinaryInformativeness> LabelMap::map(std::string_view raw) const {
  const std::string key = text::ascii_lower(text::trim(raw));
  if (auto it = table_.find(key); it != table_.end()) return it->second;
  const auto pos = key.find("informative");
  if (pos == std::string::npos) return std::nullopt;
  std::string_view before = text::trim(std::string_view(key).substr(0, pos));
  if (before.ends_with("non-") || before.ends_with("un") || before.ends_with("not") ||
      before.ends_with("non"))
    return BinaryInformativeness::NotInformative;
  return BinaryInformativeness::Informative;
}

LoadResult<LabeledMessage> load_crisislex_csv(const std::filesystem::path& path,
                                              const LabelMap& labels, Source source) {
  const std::string content = read_file(path);
  auto rows = parse_csv(content);
  LoadResult<LabeledMessage> result;
  if (rows.empty()) throw DataError(path.string() + ": missing header row");

  const auto& header = rows.front().fields;
  auto id_col = find_column(header, {"tweet_id", "tweet id", "id"}, {"id"});
  auto text_col = find_column(header, {"tweet_text", "tweet text", "text", "tweet"}, {"text"});
  auto label_col = find_column(header, {"label", "informativeness"}, {"label", "informativ"});
  if (!id_col || !text_col || !label_col) {
    if (header.size() < 3)
      throw DataError(path.string() + ": header needs id, text and label columns");
    id_col = 0;
    text_col = 1;
    label_col = 2;
  }
  const std::size_t needed = std::max({*id_col, *text_col, *label_col}) + 1;

  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto fail = [&](std::string msg) { result.errors.push_back({row.line, std::move(msg)}); };
    if (row.unterminated) {
      fail("unterminated quoted field");
      continue;
    }
    if (row.fields.size() < needed) {
      fail("expected at least " + std::to_string(needed) + " fields, found " +
           std::to_string(row.fields.size()));
      continue;
    }
    LabeledMessage lm;
    lm.message.id = std::string(text::trim(row.fields[*id_col]));
    lm.message.text = row.fields[*text_col];
    lm.message.source = source;
    if (lm.message.id.empty()) {
      fail("empty id");
      continue;
    }
    if (text::trim(lm.message.text).empty()) {
      fail("empty text");
      continue;
    }
    auto label = labels.map(row.fields[*label_col]);
    if (!label) {
      fail("unmapped label '" + row.fields[*label_col] + "'");
      continue;
    }
    if (!seen.insert(lm.message.id).second) {
      fail("duplicate id " + lm.message.id);
      continue;
    }
    lm.label = *label;
    result.records.push_back(std::move(lm));
  }
  check_malformed_ratio(path, result.records.size(), result.errors.size());
  return result;
}

std::optional<Message> parse_message_line(std::string_view line, std::string& error) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) {
    error = "invalid JSON";
    return std::nullopt;
  }
  return message_from_json(j, error);
}

LoadResult<Message> load_jsonl(const std::filesystem::path& path) {
  auto result = load_lines<Message>(path, [](const json& j, std::string& err) {
    return message_from_json(j, err);
  });
  drop_duplicate_ids(result, [](const Message& m) { return m.id; });
  return result;
}

LoadResult<LabeledMessage> load_labeled_jsonl(const std::filesystem::path& path) {
  auto result = load_lines<LabeledMessage>(
      path, [](const json& j, std::string& err) -> std::optional<LabeledMessage> {
        auto m = message_from_json(j, err);
        if (!m) return std::nullopt;
        auto lab = j.find("label");
        if (lab == j.end() || !lab->is_string()) {
          err = "missing label";
          return std::nullopt;
        }
        auto value = parse_binary_informativeness(lab->get<std::string>());
        if (!value) {
          err = "unknown label '" + lab->get<std::string>() + "'";
          return std::nullopt;
        }
        return LabeledMessage{std::move(*m), *value};
      });
  drop_duplicate_ids(result, [](const LabeledMessage& m) { return m.message.id; });
  return result;
}

LoadResult<ActionLabeledMessage> load_action_jsonl(const std::filesystem::path& path) {
  auto result = load_lines<ActionLabeledMessage>(
      path, [](const json& j, std::string& err) -> std::optional<ActionLabeledMessage> {
        auto m = message_from_json(j, err);
        if (!m) return std::nullopt;
        auto acts = j.find("actions");
        if (acts == j.end() || !acts->is_array()) {
          err = "missing actions array";
          return std::nullopt;
        }
        ActionSet set;
        for (const auto& a : *acts) {
          auto t = a.is_string() ? parse_actionability(a.get<std::string>()) : std::nullopt;
          if (!t) {
            err = "unknown actionability code " + a.dump();
            return std::nullopt;
          }
          set.insert(*t);
        }
        return ActionLabeledMessage{std::move(*m), set};
      });
  drop_duplicate_ids(result, [](const ActionLabeledMessage& m) { return m.message.id; });
  return result;
}

LoadResult<Judgment> load_judgments(const std::filesystem::path& path) {
  auto result = load_lines<Judgment>(
      path, [](const json& j, std::string& err) -> std::optional<Judgment> {
        if (!j.is_object()) {
          err = "record is not an object";
          return std::nullopt;
        }
        Judgment out;
        for (auto [key, field] : {std::pair{"message_id", &out.message_id},
                                  std::pair{"worker_id", &out.worker_id}}) {
          auto it = j.find(key);
          if (it == j.end() || !it->is_string()) {
            err = std::string("missing ") + key;
            return std::nullopt;
          }
          *field = it->get<std::string>();
        }
        auto lab = j.find("label");
        auto value = (lab != j.end() && lab->is_string())
                         ? parse_informativeness(lab->get<std::string>())
                         : std::nullopt;
        if (!value) {
          err = "label must be informative, somewhat or not";
          return std::nullopt;
        }
        out.label = *value;
        return out;
      });
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<Judgment> kept;
  for (auto& jd : result.records) {
    if (!seen.emplace(jd.message_id, jd.worker_id).second) {
      result.errors.push_back({0, "duplicate judgment by " + jd.worker_id + " on " + jd.message_id});
      continue;
    }
    kept.push_back(std::move(jd));
  }
  result.records = std::move(kept);
  return result;
}

InformativenessLabel adjudicate(std::span<const InformativenessLabel> judgments) {
  if (judgments.empty()) throw InvalidArgument("adjudicate: no judgments");
  std::array<std::size_t, 3> counts{};
  for (auto j : judgments) ++counts[static_cast<std::size_t>(j)];
  // Scan from most to least informative; strict > keeps the earlier (more
  // informative) label on ties.
  std::size_t best = 2;
  for (std::size_t k = 2; k-- > 0;)
    if (counts[k] > counts[best]) best = k;
  return static_cast<InformativenessLabel>(best);
}

AgreementReport agreement(
    const std::map<std::string, std::vector<InformativenessLabel>>& by_message) {
  AgreementReport report;
  std::map<InformativenessLabel, std::pair<std::size_t, std::size_t>> tally;
  std::size_t match = 0, total = 0;
  for (const auto& [id, labels] : by_message) {
    if (labels.size() < 2)
      throw InvalidArgument("agreement: message " + id + " has fewer than two judgments");
    const auto winner = adjudicate(labels);
    const auto hits = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), winner));
    tally[winner].first += hits;
    tally[winner].second += labels.size();
    match += hits;
    total += labels.size();
  }
  report.messages = by_message.size();
  report.overall = total ? static_cast<double>(match) / static_cast<double>(total) : 0.0;
  for (const auto& [label, mt] : tally)
    report.per_category[label] = static_cast<double>(mt.first) / static_cast<double>(mt.second);
  return report;
}

GoldScore score_gold(std::string_view worker_id, std::span<const GoldQuestion> gold,
                     std::span<const GoldAnswer> answers, double threshold) {
  std::unordered_map<std::string_view, const GoldAnswerValue*> key;
  for (const auto& g : gold) key.emplace(g.message_id, &g.correct);
  GoldScore score;
  std::size_t correct = 0;
  for (const auto& a : answers) {
    if (a.worker_id != worker_id) continue;
    auto it = key.find(a.message_id);
    if (it == key.end()) continue;
    ++score.answered;
    if (*it->second == a.answer) ++correct;
  }
  if (score.answered == 0)
    throw DataError("worker " + std::string(worker_id) + " answered no gold questions");
  score.accuracy = static_cast<double>(correct) / static_cast<double>(score.answered);
  score.flagged = score.accuracy < threshold;
  return score;
}

Adjudication adjudicate_judgments(std::span<const Judgment> judgments,
                                  std::span<const GoldQuestion> gold, double threshold) {
  Adjudication out;
  std::set<std::string> gold_ids;
  for (const auto& g : gold) gold_ids.insert(g.message_id);

  std::set<std::pair<std::string, std::string>> seen;
  std::vector<GoldAnswer> answers;
  std::set<std::string> workers_with_gold;
  for (const auto& j : judgments) {
    if (!seen.emplace(j.message_id, j.worker_id).second)
      throw DataError("duplicate judgment by " + j.worker_id + " on " + j.message_id);
    if (gold_ids.contains(j.message_id)) {
      answers.push_back({j.message_id, j.worker_id, j.label});
      workers_with_gold.insert(j.worker_id);
    }
  }
  for (const auto& w : workers_with_gold) {
    auto s = score_gold(w, gold, answers, threshold);
    out.worker_scores[w] = s;
    if (s.flagged) out.excluded_workers.insert(w);
  }

  std::map<std::string, std::vector<InformativenessLabel>> by_message;
  for (const auto& j : judgments) {
    if (gold_ids.contains(j.message_id) || out.excluded_workers.contains(j.worker_id)) continue;
    by_message[j.message_id].push_back(j.label);
  }
  std::map<std::string, std::vector<InformativenessLabel>> multi;
  for (const auto& [id, labels] : by_message) {
    out.labels[id] = adjudicate(labels);
    if (labels.size() >= 2) multi.emplace(id, labels);
  }
  out.agreement = agreement(multi);
  return out;
}

bool is_retweet(std::string_view text) {
  const auto t = text::trim(text);
  return t.size() >= 4 && (t[0] == 'R' || t[0] == 'r') && (t[1] == 'T' || t[1] == 't') &&
         t[2] == ' ' && t[3] == '@';
}

std::vector<std::string> dedupe_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& tok : text::tokenize(text)) {
    if (text::is_url(tok) || text::is_mention(tok)) continue;
    out.push_back(text::ascii_lower(tok));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

double sorted_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

}  // namespace

std::vector<std::size_t> dedupe_indices(std::span<const Message> messages) {
  std::vector<std::size_t> order(messages.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const bool dated = !messages.empty() &&
                     std::all_of(messages.begin(), messages.end(),
                                 [](const Message& m) { return m.timestamp.has_value(); });
  if (dated)
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return *messages[a].timestamp < *messages[b].timestamp;
    });

  std::vector<std::vector<std::string>> kept_tokens;
  std::vector<std::size_t> survivors;
  for (std::size_t idx : order) {
    if (is_retweet(messages[idx].text)) continue;
    auto toks = dedupe_tokens(messages[idx].text);
    const bool dup = std::any_of(kept_tokens.begin(), kept_tokens.end(), [&](const auto& k) {
      return sorted_jaccard(toks, k) >= kNearDuplicateJaccard;
    });
    if (dup) continue;
    kept_tokens.push_back(std::move(toks));
    survivors.push_back(idx);
  }
  std::sort(survivors.begin(), survivors.end());
  return survivors;
}

MessageSet dedupe(std::span<const Message> messages) {
  MessageSet out;
  for (auto i : dedupe_indices(messages)) out.push_back(messages[i]);
  return out;
}

BinaryInformativeness collapse_labels(InformativenessLabel label) {
  return label == InformativenessLabel::NotInformative ? BinaryInformativeness::NotInformative
                                                       : BinaryInformativeness::Informative;
}

Split build_split(const LabeledSet& ccsid, const LabeledSet& crisislex, std::uint64_t seed,
                  const SplitOptions& options) {
  {
    std::unordered_set<std::string> ids;
    for (const auto* set : {&ccsid, &crisislex})
      for (const auto& m : *set)
        if (!ids.insert(m.message.id).second)
          throw DataError("build_split: duplicate message id " + m.message.id);
  }

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < crisislex.size(); ++i)
    (crisislex[i].label == BinaryInformativeness::Informative ? pos : neg).push_back(i);

  struct Pool {
    const char* name;
    std::size_t available;
    std::size_t quota;
  };
  std::array<Pool, 3> pools{{
      {"CCSID", ccsid.size(), options.ccsid_validation},
      {"CrisisLex informative", pos.size(), options.crisislex_per_class},
      {"CrisisLex not-informative", neg.size(), options.crisislex_per_class},
  }};

  Split split;
  const bool short_pool = std::any_of(pools.begin(), pools.end(),
                                      [](const Pool& p) { return p.available < p.quota; });
  if (short_pool) {
    double scale = 1.0;
    const Pool* limiting = &pools[0];
    for (const auto& p : pools) {
      if (p.quota == 0) continue;
      const double s = static_cast<double>(p.available) / (2.0 * static_cast<double>(p.quota));
      if (s < scale) {
        scale = s;
        limiting = &p;
      }
    }
    for (auto& p : pools) {
      const auto q = static_cast<std::size_t>(std::llround(static_cast<double>(p.quota) * scale));
      if (p.quota > 0 && q == 0)
        throw DataError(std::string("build_split: not enough ") + limiting->name +
                        " messages (" + std::to_string(limiting->available) + ")");
      p.quota = q;
    }
    split.scale = scale;
  }

  const auto ccsid_pick = sample_indices(ccsid.size(), pools[0].quota, derive_seed(seed, "split/ccsid"));
  const auto pos_pick = sample_indices(pos.size(), pools[1].quota, derive_seed(seed, "split/pos"));
  const auto neg_pick = sample_indices(neg.size(), pools[2].quota, derive_seed(seed, "split/neg"));

  std::vector<bool> ccsid_val(ccsid.size(), false), lex_val(crisislex.size(), false);
  for (auto i : ccsid_pick) ccsid_val[i] = true;
  for (auto i : pos_pick) lex_val[pos[i]] = true;
  for (auto i : neg_pick) lex_val[neg[i]] = true;

  for (auto i : ccsid_pick) split.validation.push_back(ccsid[i]);
  for (auto i : pos_pick) split.validation.push_back(crisislex[pos[i]]);
  for (auto i : neg_pick) split.validation.push_back(crisislex[neg[i]]);
  for (std::size_t i = 0; i < ccsid.size(); ++i)
    if (!ccsid_val[i]) split.train.push_back(ccsid[i]);
  for (std::size_t i = 0; i < crisislex.size(); ++i)
    if (!lex_val[i]) split.train.push_back(crisislex[i]);
  return split;
}

}  // namespace triage::corpus
