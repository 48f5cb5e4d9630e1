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

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "triage/actionability.hpp"
#include "triage/corpus.hpp"
#include "triage/error.hpp"
#include "triage/evaluation.hpp"
#include "triage/features.hpp"
#include "triage/informativeness.hpp"
#include "triage/pipeline.hpp"
#include "triage/profile.hpp"
#include "triage/text.hpp"

namespace triage::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised after outputs are written, when --strict turns a warning into a
// failure.
struct NotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  int threads = 0;
  bool strict = false;
};

struct Context {
  const Common& common;
  std::ostream& out;
  std::ostream& err;
};

// key = value lines; '#' starts a comment. Keys are option long names.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key(text::trim(body.substr(0, eq)));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    kv[key] = std::string(text::trim(body.substr(eq + 1)));
  }
  return kv;
}

// Fills options the command line left unset from the config file.
void apply_config(CLI::App& app, const std::map<std::string, std::string>& kv) {
  for (CLI::Option* opt : app.get_options()) {
    if (opt->count() > 0) continue;
    const std::string name = opt->get_single_name();
    auto it = kv.find(name);
    if (it == kv.end() || name == "config" || name == "help") continue;
    if (opt->get_type_size() == 0) {
      // flag
      const auto v = text::ascii_lower(it->second);
      if (v == "true" || v == "1" || v == "yes") opt->add_result("true");
      else if (v == "false" || v == "0" || v == "no") continue;
      else throw UsageError("config key " + name + " expects true or false");
    } else {
      opt->add_result(it->second);
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key " + name + ": " + e.what());
    }
  }
}

void need(const std::string& value, const std::string& flag) {
  if (value.empty()) throw UsageError("missing required option --" + flag);
}

// Writes to `fallback` for an empty path or "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw DataError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }
  void close(const std::string& path) {
    stream_->flush();
    if (!*stream_) throw DataError("write failed for " + (path.empty() ? "output" : path));
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void write_text(const std::string& path, const std::string& content, std::ostream& fallback) {
  Output o(path, fallback);
  *o << content;
  o.close(path);
}

template <typename T>
std::vector<T> checked(corpus::LoadResult<T> result, const std::string& path, std::ostream& err) {
  for (std::size_t i = 0; i < result.errors.size() && i < 10; ++i) {
    const auto& e = result.errors[i];
    err << path;
    if (e.line) err << ":" << e.line;
    err << ": " << e.message << "\n";
  }
  if (result.errors.size() > 10)
    err << path << ": " << result.errors.size() - 10 << " more bad records\n";
  if (result.records.empty()) throw DataError(path + ": no usable records");
  return std::move(result.records);
}

json message_json(const Message& m) {
  json j;
  j["id"] = m.id;
  j["text"] = m.text;
  if (m.timestamp) j["timestamp"] = *m.timestamp;
  j["source"] = std::string(to_string(m.source));
  return j;
}

corpus::LabeledSet load_labeled_any(const std::string& path, std::ostream& err) {
  if (path.size() >= 4 && text::ascii_lower(path.substr(path.size() - 4)) == ".csv")
    return checked(corpus::load_crisislex_csv(path), path, err);
  return checked(corpus::load_labeled_jsonl(path), path, err);
}

void write_labeled(const std::string& path, const corpus::LabeledSet& set, std::ostream& fallback) {
  Output o(path, fallback);
  for (const auto& lm : set) {
    auto j = message_json(lm.message);
    j["label"] = std::string(to_string(lm.label));
    *o << j.dump() << "\n";
  }
  o.close(path);
}

std::vector<features::TokenizedExample> tokenized(
    const std::vector<corpus::ActionLabeledMessage>& messages) {
  std::vector<features::TokenizedExample> out;
  out.reserve(messages.size());
  for (const auto& m : messages) out.push_back({text::tokenize(m.message.text), m.actions});
  return out;
}

std::vector<double> parse_grid(const std::string& s, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = text::trim(item);
    if (t.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(std::string(t), &used);
      if (used != t.size() || !(v > 0)) throw std::invalid_argument("");
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--" + flag + ": '" + std::string(t) + "' is not a positive number");
    }
  }
  if (out.empty()) throw UsageError("--" + flag + " is empty");
  return out;
}

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

features::DenominatorPolicy parse_denominator(const std::string& s) {
  if (s == "all") return features::DenominatorPolicy::AllTokens;
  if (s == "embedded") return features::DenominatorPolicy::EmbeddedTokensOnly;
  throw UsageError("--denominator must be 'all' or 'embedded'");
}

// Keyword lists for all nine categories: the file (or the built-in lists),
// then induced lists for whatever is still missing.
std::vector<features::KeywordList> complete_keywords(
    const std::string& path, const std::vector<features::TokenizedExample>& corpus,
    const features::InductionOptions& induction, std::ostream& err) {
  auto lists = path.empty() ? features::default_keyword_lists() : features::load_keyword_lists(path);
  for (auto t : kAllActionabilityTypes) {
    if (features::find_list(lists, t)) continue;
    auto induced = features::induce_keywords(corpus, t, induction);
    if (induced.list.keywords.empty())
      throw DataError(std::string("no keyword could be induced for category ") + code_of(t));
    if (induced.short_list)
      err << "warning: only " << induced.list.keywords.size() << " keywords induced for "
          << code_of(t) << "\n";
    lists.push_back(std::move(induced.list));
  }
  return lists;
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
  std::string input, format = "auto", labels, source = "crisislex", output;
  bool dedupe = false;
};

int cmd_ingest(const IngestOptions& o, Context& ctx) {
  need(o.input, "input");
  std::string format = o.format;
  if (format == "auto") {
    const bool csv = o.input.size() >= 4 &&
                     text::ascii_lower(o.input.substr(o.input.size() - 4)) == ".csv";
    format = csv ? "crisislex" : "jsonl";
  }
  corpus::LabeledSet labeled;
  MessageSet plain;
  if (format == "crisislex") {
    const auto map = o.labels.empty() ? corpus::LabelMap::standard() : corpus::LabelMap::load(o.labels);
    labeled = checked(corpus::load_crisislex_csv(o.input, map, parse_source(o.source)), o.input,
                      ctx.err);
  } else if (format == "labeled") {
    labeled = checked(corpus::load_labeled_jsonl(o.input), o.input, ctx.err);
  } else if (format == "jsonl") {
    plain = checked(corpus::load_jsonl(o.input), o.input, ctx.err);
  } else {
    throw UsageError("--format must be auto, crisislex, labeled or jsonl");
  }
  const bool is_labeled = plain.empty();
  if (o.dedupe) {
    MessageSet messages;
    if (is_labeled)
      for (const auto& lm : labeled) messages.push_back(lm.message);
    const auto keep = corpus::dedupe_indices(is_labeled ? messages : plain);
    const std::size_t before = is_labeled ? labeled.size() : plain.size();
    if (is_labeled) {
      corpus::LabeledSet kept;
      for (auto i : keep) kept.push_back(labeled[i]);
      labeled = std::move(kept);
    } else {
      MessageSet kept;
      for (auto i : keep) kept.push_back(plain[i]);
      plain = std::move(kept);
    }
    ctx.err << "dedupe: kept " << keep.size() << " of " << before << " messages\n";
  }
  if (is_labeled) {
    write_labeled(o.output, labeled, ctx.out);
  } else {
    Output out(o.output, ctx.out);
    for (const auto& m : plain) *out << message_json(m).dump() << "\n";
    out.close(o.output);
  }
  return kExitOk;
}

// ------------------------------------------------------------ adjudicate

struct AdjudicateOptions {
  std::string judgments, gold, messages, source = "ccsid", output;
  double gold_threshold = corpus::kDefaultGoldThreshold;
};

std::vector<corpus::GoldQuestion> load_gold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<corpus::GoldQuestion> gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    const auto where = path + ":" + std::to_string(line_no);
    if (j.is_discarded() || !j.is_object() || !j.contains("message_id") || !j.contains("label") ||
        !j["message_id"].is_string() || !j["label"].is_string())
      throw DataError(where + ": expected {\"message_id\": ..., \"label\": ...}");
    const auto label = parse_informativeness(j["label"].get<std::string>());
    if (!label) throw DataError(where + ": unknown label");
    gold.push_back({j["message_id"].get<std::string>(), *label});
  }
  return gold;
}

int cmd_adjudicate(const AdjudicateOptions& o, Context& ctx) {
  need(o.judgments, "judgments");
  const auto judgments = checked(corpus::load_judgments(o.judgments), o.judgments, ctx.err);
  const auto gold = o.gold.empty() ? std::vector<corpus::GoldQuestion>{} : load_gold(o.gold);
  const auto result = corpus::adjudicate_judgments(judgments, gold, o.gold_threshold);

  for (const auto& w : result.excluded_workers)
    ctx.err << "excluded worker " << w << " (gold accuracy "
            << fixed6(result.worker_scores.at(w).accuracy) << ")\n";
  ctx.err << "agreement: " << fixed6(result.agreement.overall) << " over "
          << result.agreement.messages << " messages\n";
  for (const auto& [label, value] : result.agreement.per_category)
    ctx.err << "  " << to_string(label) << ": " << fixed6(value) << "\n";

  Output out(o.output, ctx.out);
  if (o.messages.empty()) {
    for (const auto& [id, label] : result.labels)
      *out << json{{"id", id}, {"label", std::string(to_string(label))}}.dump() << "\n";
  } else {
    const auto messages = checked(corpus::load_jsonl(o.messages), o.messages, ctx.err);
    std::size_t missing = result.labels.size();
    for (auto m : messages) {
      auto it = result.labels.find(m.id);
      if (it == result.labels.end()) continue;
      --missing;
      if (m.source == Source::Other) m.source = parse_source(o.source);
      auto j = message_json(m);
      j["label"] = std::string(to_string(it->second));
      *out << j.dump() << "\n";
    }
    if (missing) ctx.err << "warning: " << missing << " adjudicated ids have no message text\n";
  }
  out.close(o.output);
  return kExitOk;
}

// ----------------------------------------------------------------- split

struct SplitCmdOptions {
  std::string ccsid, crisislex, train_out, validation_out;
  std::size_t ccsid_validation = 300, crisislex_per_class = 150;
};

int cmd_split(const SplitCmdOptions& o, Context& ctx) {
  need(o.ccsid, "ccsid");
  need(o.crisislex, "crisislex");
  need(o.train_out, "train-out");
  need(o.validation_out, "validation-out");
  auto ccsid = load_labeled_any(o.ccsid, ctx.err);
  for (auto& m : ccsid) m.message.source = Source::CCSID;
  auto crisislex = load_labeled_any(o.crisislex, ctx.err);
  for (auto& m : crisislex) m.message.source = Source::CrisisLex;
  const auto split = corpus::build_split(ccsid, crisislex, derive_seed(ctx.common.seed, "split"),
                                         {o.ccsid_validation, o.crisislex_per_class});
  write_labeled(o.train_out, split.train, ctx.out);
  write_labeled(o.validation_out, split.validation, ctx.out);
  ctx.err << "split: " << split.train.size() << " train, " << split.validation.size()
          << " validation, scale " << fixed6(split.scale) << "\n";
  return kExitOk;
}

// ------------------------------------------------------- induce-keywords

struct InduceOptions {
  std::string corpus, keywords, output;
  std::size_t k = 18, min_count = 3;
  bool all = false;
};

int cmd_induce(const InduceOptions& o, Context& ctx) {
  need(o.corpus, "corpus");
  const auto examples = tokenized(checked(corpus::load_action_jsonl(o.corpus), o.corpus, ctx.err));
  std::vector<features::KeywordList> base;
  if (!o.all)
    base = o.keywords.empty() ? features::default_keyword_lists()
                              : features::load_keyword_lists(o.keywords);
  std::vector<features::KeywordList> lists;
  for (auto t : kAllActionabilityTypes) {
    if (const auto* given = features::find_list(base, t)) {
      lists.push_back(*given);
      continue;
    }
    const auto induced = features::induce_keywords(examples, t, {o.k, o.min_count});
    ctx.err << code_of(t) << " " << name_of(t) << ":";
    for (const auto& s : induced.ranked) ctx.err << " " << s.word << "(" << fixed6(s.score) << ")";
    if (induced.short_list) ctx.err << "  [short list]";
    ctx.err << "\n";
    lists.push_back(induced.list);
  }
  write_text(o.output, features::format_keyword_lists(lists), ctx.out);
  return kExitOk;
}

// ------------------------------------------------------------- train-inf

struct TrainInfOptions {
  std::string train, validation, model, trace;
  std::size_t epochs = 100, batch = 32, max_len = text::kDefaultMaxLen;
  double lr = 0.01, momentum = 0.9, ccsid_weight = 2.0;
};

int cmd_train_inf(const TrainInfOptions& o, Context& ctx) {
  need(o.train, "train");
  need(o.validation, "validation");
  need(o.model, "model");
  corpus::Split split;
  split.train = load_labeled_any(o.train, ctx.err);
  split.validation = load_labeled_any(o.validation, ctx.err);
  informativeness::CnnConfig config;
  config.max_epochs = o.epochs;
  config.batch_size = o.batch;
  config.max_len = o.max_len;
  config.learning_rate = o.lr;
  config.momentum = o.momentum;
  config.ccsid_weight = o.ccsid_weight;
  config.seed = ctx.common.seed;
  config.threads = ctx.common.threads;
  config.validate();
  const auto result = informativeness::train(informativeness::init_model(config), split);
  informativeness::save_model(result.model, std::filesystem::path(o.model));

  const auto& tr = result.trace;
  if (!o.trace.empty()) {
    std::string csv = "epoch,training_loss,validation_loss\n";
    for (const auto& e : tr.epochs)
      csv += std::to_string(e.epoch) + "," + fixed6(e.training_loss) + "," +
             fixed6(e.validation_loss) + "\n";
    write_text(o.trace, csv, ctx.out);
  }
  ctx.err << "trained " << tr.epochs.size() - 1 << " epochs; selected epoch " << tr.selected_epoch;
  if (tr.crossover_epoch)
    ctx.err << "; loss crossover at epoch " << *tr.crossover_epoch;
  else
    ctx.err << "; no loss crossover";
  ctx.err << "\n";
  return kExitOk;
}

// ------------------------------------------------------------- train-act

struct ActFeatureOptions {
  std::string embeddings, keywords, denominator = "all";
  std::size_t dim = 25, k = 18, min_count = 3;
  double cutoff = 0.45;

  features::FeatureConfig feature_config() const {
    features::FeatureConfig f{cutoff, parse_denominator(denominator)};
    f.validate();
    return f;
  }
};

void add_feature_options(CLI::App* sub, ActFeatureOptions& f) {
  sub->add_option("--embeddings", f.embeddings, "Word vector file");
  sub->add_option("--dim", f.dim, "Embedding dimension");
  sub->add_option("--keywords", f.keywords, "Keyword list file (default: built-in lists)");
  sub->add_option("--cutoff", f.cutoff, "Cosine similarity cutoff");
  sub->add_option("--denominator", f.denominator, "Feature denominator: all or embedded");
  sub->add_option("--k", f.k, "Keywords to induce per missing category");
  sub->add_option("--min-count", f.min_count, "Minimum token count for induction");
}

struct TrainActOptions {
  std::string corpus, model;
  ActFeatureOptions features;
  actionability::SvmHyperparams hp;
};

int cmd_train_act(const TrainActOptions& o, Context& ctx) {
  need(o.corpus, "corpus");
  need(o.features.embeddings, "embeddings");
  need(o.model, "model");
  o.hp.validate();
  const auto fc = o.features.feature_config();
  const auto examples = tokenized(checked(corpus::load_action_jsonl(o.corpus), o.corpus, ctx.err));
  const auto table = text::load_embeddings(o.features.embeddings, o.features.dim);
  const auto lists =
      complete_keywords(o.features.keywords, examples, {o.features.k, o.features.min_count}, ctx.err);

  actionability::EnsembleTrainOptions opts{o.hp, fc, ctx.common.seed, ctx.common.threads};
  std::vector<actionability::CategoryTrainReport> report;
  const auto ensemble = actionability::train_ensemble(examples, lists, table, opts, &report);
  actionability::save_ensemble(ensemble, std::filesystem::path(o.model));

  std::size_t unconverged = 0;
  for (const auto& r : report) {
    ctx.err << code_of(r.category) << " " << name_of(r.category) << ": " << r.positives << "+"
            << r.negatives << " examples, " << r.support_vectors << " support vectors";
    if (r.passthrough) ctx.err << ", fewer negatives than positives";
    if (!r.converged) {
      ctx.err << ", NOT CONVERGED";
      ++unconverged;
    }
    if (!r.missing_keywords.empty()) ctx.err << ", " << r.missing_keywords.size() << " keywords without embedding";
    ctx.err << "\n";
  }
  if (unconverged) {
    ctx.err << "warning: " << unconverged << " categories stopped at --max-passes\n";
    if (ctx.common.strict) throw NotConverged("training did not converge");
  }
  return kExitOk;
}

// ------------------------------------------------------------------ tune

struct TuneOptions {
  std::string corpus, category, output, c_grid = "0.5,1,5,10,20,50", gamma_grid = "0.1,0.5,1,3,10";
  ActFeatureOptions features;
  std::size_t folds = 5;
};

int cmd_tune(const TuneOptions& o, Context& ctx) {
  need(o.corpus, "corpus");
  need(o.features.embeddings, "embeddings");
  need(o.category, "category");
  const auto category = parse_actionability(o.category);
  if (!category) throw UsageError("unknown category '" + o.category + "'");
  const auto C_grid = parse_grid(o.c_grid, "C-grid");
  const auto gamma_grid = parse_grid(o.gamma_grid, "gamma-grid");
  const auto fc = o.features.feature_config();
  const auto examples = tokenized(checked(corpus::load_action_jsonl(o.corpus), o.corpus, ctx.err));
  const auto table = text::load_embeddings(o.features.embeddings, o.features.dim);
  const auto lists =
      complete_keywords(o.features.keywords, examples, {o.features.k, o.features.min_count}, ctx.err);

  const features::Vectorizer vec(*features::find_list(lists, *category), table, fc);
  std::vector<std::vector<double>> pos, neg;
  for (const auto& ex : examples)
    (ex.actions.contains(*category) ? pos : neg).push_back(vec(ex.tokens).values);
  if (pos.empty()) throw DataError(std::string("no positive example for ") + code_of(*category));
  const auto balanced = actionability::downsample_negatives<std::vector<double>>(
      pos, neg, derive_seed(ctx.common.seed, std::string("downsample/") + code_of(*category)));
  std::vector<std::vector<double>> X = balanced.positives;
  X.insert(X.end(), balanced.negatives.begin(), balanced.negatives.end());
  std::vector<int> y(balanced.positives.size(), 1);
  y.resize(X.size(), -1);

  const auto grid = actionability::grid_search(X, y, C_grid, gamma_grid, o.folds,
                                               derive_seed(ctx.common.seed, "tune"), {},
                                               ctx.common.threads);
  std::string csv = "C,gamma,mean_f1\n";
  for (const auto& c : grid.cells) csv += fixed6(c.C) + "," + fixed6(c.gamma) + "," + fixed6(c.mean_f1) + "\n";
  write_text(o.output, csv, ctx.out);
  ctx.err << "best: C=" << grid.best.C << " gamma=" << grid.best.gamma
          << " mean F1=" << fixed6(grid.best.mean_f1) << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- classify

struct ClassifyOptions {
  std::string input, inf_model, act_model, embeddings, output;
  std::size_t dim = 25, chunk = 512;
  double threshold = 0.5;
};

int cmd_classify(const ClassifyOptions& o, Context& ctx) {
  need(o.input, "input");
  need(o.inf_model, "inf-model");
  need(o.act_model, "act-model");
  need(o.embeddings, "embeddings");
  if (o.chunk == 0) throw UsageError("--chunk must be positive");
  const auto cnn = informativeness::load_model(std::filesystem::path(o.inf_model));
  const auto ensemble = actionability::load_ensemble(std::filesystem::path(o.act_model));
  const auto table = text::load_embeddings(o.embeddings, o.dim);
  const actionability::Tagger tagger(ensemble, table);
  const pipeline::Pipeline pipe(cnn, tagger, o.threshold);

  std::ifstream in(o.input);
  if (!in) throw DataError("cannot open " + o.input);
  Output out(o.output, ctx.out);
  std::vector<Message> chunk;
  std::size_t line_no = 0, bad = 0, done = 0;
  auto flush = [&] {
    for (const auto& r : pipe.run_batch(chunk, ctx.common.threads))
      *out << pipeline::to_json_line(r) << "\n";
    done += chunk.size();
    chunk.clear();
  };
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    std::string error;
    auto m = corpus::parse_message_line(line, error);
    if (!m) {
      if (bad++ < 10) ctx.err << o.input << ":" << line_no << ": " << error << "\n";
      continue;
    }
    chunk.push_back(std::move(*m));
    if (chunk.size() == o.chunk) flush();
  }
  flush();
  out.close(o.output);
  ctx.err << "classified " << done << " messages (" << pipe.tagger_calls() << " passed the gate)";
  if (bad) ctx.err << ", skipped " << bad << " bad records";
  ctx.err << "\n";
  if (done == 0) throw DataError(o.input + ": no usable records");
  return kExitOk;
}

// -------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::string act_model, test, corpus, inf_model, labeled, table_out, csv_out;
  ActFeatureOptions features;
  actionability::SvmHyperparams hp;
  std::size_t folds = 0;
  double threshold = 0.5;
};

int cmd_evaluate(const EvaluateOptions& o, Context& ctx) {
  if (!o.inf_model.empty()) {
    need(o.labeled, "labeled");
    const auto model = informativeness::load_model(std::filesystem::path(o.inf_model));
    const auto set = load_labeled_any(o.labeled, ctx.err);
    std::vector<int> pred, gold;
    for (const auto& lm : set) {
      const auto d = informativeness::classify(model, lm.message.text, o.threshold);
      pred.push_back(d.decision == BinaryInformativeness::Informative ? 1 : -1);
      gold.push_back(lm.label == BinaryInformativeness::Informative ? 1 : -1);
    }
    const auto c = evaluation::confusion(pred, gold);
    const auto m = evaluation::metrics(c);
    std::ostringstream s;
    s << "informativeness (held-out, threshold " << o.threshold << ")\n"
      << "tp=" << c.tp << " fp=" << c.fp << " tn=" << c.tn << " fn=" << c.fn << "\n"
      << "accuracy " << evaluation::percent(m.accuracy) << "  precision "
      << evaluation::percent(m.precision) << "  recall " << evaluation::percent(m.recall)
      << "  F1 " << evaluation::percent(m.f1) << "\n";
    write_text(o.table_out, s.str(), ctx.out);
    return kExitOk;
  }

  need(o.features.embeddings, "embeddings");
  const auto table = text::load_embeddings(o.features.embeddings, o.features.dim);
  std::vector<evaluation::CategoryRow> rows;
  evaluation::Protocol protocol;
  if (o.folds > 0) {
    need(o.corpus, "corpus");
    o.hp.validate();
    const auto examples = tokenized(checked(corpus::load_action_jsonl(o.corpus), o.corpus, ctx.err));
    const auto lists = complete_keywords(o.features.keywords, examples,
                                         {o.features.k, o.features.min_count}, ctx.err);
    actionability::EnsembleTrainOptions opts{o.hp, o.features.feature_config(), ctx.common.seed,
                                             ctx.common.threads};
    rows = actionability::cross_validate_ensemble(examples, lists, table, opts, o.folds);
    protocol = evaluation::Protocol::CrossValidation;
  } else {
    need(o.act_model, "act-model");
    need(o.test, "test");
    const auto ensemble = actionability::load_ensemble(std::filesystem::path(o.act_model));
    const auto examples = tokenized(checked(corpus::load_action_jsonl(o.test), o.test, ctx.err));
    rows = actionability::evaluate_ensemble(ensemble, table, examples);
    protocol = evaluation::Protocol::HeldOut;
  }
  const auto report = evaluation::report_table(rows, protocol);
  write_text(o.table_out, report.table, ctx.out);
  if (!o.csv_out.empty()) write_text(o.csv_out, report.csv, ctx.out);
  return kExitOk;
}

// --------------------------------------------------------------- profile

struct ProfileOptions {
  std::string tagged, classified, messages, svg, csv;
  std::int64_t width = profile::kDefaultBucketWidth;
};

int cmd_profile(const ProfileOptions& o, Context& ctx) {
  std::vector<profile::TaggedMessage> tagged;
  if (!o.tagged.empty()) {
    for (auto& m : checked(corpus::load_action_jsonl(o.tagged), o.tagged, ctx.err))
      tagged.emplace_back(std::move(m.message), m.actions);
  } else {
    need(o.classified, "classified (or --tagged)");
    need(o.messages, "messages");
    std::map<std::string, Message> by_id;
    for (auto& m : checked(corpus::load_jsonl(o.messages), o.messages, ctx.err))
      by_id.emplace(m.id, std::move(m));
    std::ifstream in(o.classified);
    if (!in) throw DataError("cannot open " + o.classified);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      const auto where = o.classified + ":" + std::to_string(line_no);
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("id") || !j.contains("actions") || !j["id"].is_string() ||
          !j["actions"].is_array())
        throw DataError(where + ": expected a classify output record");
      const auto it = by_id.find(j["id"].get<std::string>());
      if (it == by_id.end()) throw DataError(where + ": id not found in " + o.messages);
      if (j.value("informative", true) == false) continue;
      ActionSet set;
      for (const auto& a : j["actions"]) {
        const auto t = a.is_string() ? parse_actionability(a.get<std::string>()) : std::nullopt;
        if (!t) throw DataError(where + ": bad action code");
        set.insert(*t);
      }
      tagged.emplace_back(it->second, set);
    }
  }
  if (tagged.empty()) throw DataError("profile: no messages to chart");
  const auto p = profile::build_profile(tagged, o.width);
  const auto chart = profile::render_chart(p);
  if (o.svg.empty() && o.csv.empty()) {
    ctx.out << chart.svg;
  } else {
    if (!o.svg.empty()) write_text(o.svg, chart.svg, ctx.out);
    if (!o.csv.empty()) write_text(o.csv, chart.csv, ctx.out);
  }
  ctx.err << "profile: " << p.buckets.size() << " buckets\n";
  return kExitOk;
}

void add_svm_options(CLI::App* sub, actionability::SvmHyperparams& hp) {
  sub->add_option("--C", hp.C, "SVM box constraint");
  sub->add_option("--gamma", hp.gamma, "RBF kernel width");
  sub->add_option("--tolerance", hp.tolerance, "KKT tolerance");
  sub->add_option("--max-passes", hp.max_passes, "SMO sweep limit");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-stage crisis message triage", "triage"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config, "key = value file; command-line flags win");
  app.add_option("--seed", common.seed, "Top-level random seed");
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  app.add_flag("--strict", common.strict, "Exit 3 when SVM training does not converge");

  IngestOptions ingest;
  auto* s_ingest = app.add_subcommand("ingest", "Load, validate and optionally dedupe a dataset");
  s_ingest->add_option("--input", ingest.input, "CrisisLex CSV or JSONL file");
  s_ingest->add_option("--format", ingest.format, "auto, crisislex, labeled or jsonl");
  s_ingest->add_option("--labels", ingest.labels, "Label mapping file for CSV input");
  s_ingest->add_option("--source", ingest.source, "Source tag for CSV records");
  s_ingest->add_flag("--dedupe", ingest.dedupe, "Drop retweets and near duplicates");
  s_ingest->add_option("--output", ingest.output, "Output JSONL (default stdout)");

  AdjudicateOptions adj;
  auto* s_adj = app.add_subcommand("adjudicate", "Majority-vote crowd judgments");
  s_adj->add_option("--judgments", adj.judgments, "JSONL of message_id, worker_id, label");
  s_adj->add_option("--gold", adj.gold, "JSONL of gold message_id, label");
  s_adj->add_option("--gold-threshold", adj.gold_threshold, "Minimum worker gold accuracy");
  s_adj->add_option("--messages", adj.messages, "Message JSONL to attach text to the labels");
  s_adj->add_option("--source", adj.source, "Source tag for messages without one");
  s_adj->add_option("--output", adj.output, "Output JSONL (default stdout)");

  SplitCmdOptions split;
  auto* s_split = app.add_subcommand("split", "Build the training/validation split");
  s_split->add_option("--ccsid", split.ccsid, "Labeled CCSID messages");
  s_split->add_option("--crisislex", split.crisislex, "Labeled CrisisLex messages (CSV or JSONL)");
  s_split->add_option("--ccsid-validation", split.ccsid_validation, "CCSID validation quota");
  s_split->add_option("--crisislex-per-class", split.crisislex_per_class,
                      "CrisisLex validation quota per class");
  s_split->add_option("--train-out", split.train_out, "Training JSONL");
  s_split->add_option("--validation-out", split.validation_out, "Validation JSONL");

  InduceOptions induce;
  auto* s_induce = app.add_subcommand("induce-keywords", "Induce keyword lists from labeled data");
  s_induce->add_option("--corpus", induce.corpus, "Action-labeled JSONL");
  s_induce->add_option("--keywords", induce.keywords, "Lists to keep (default: built-in lists)");
  s_induce->add_option("--k", induce.k, "Keywords per category");
  s_induce->add_option("--min-count", induce.min_count, "Minimum token count");
  s_induce->add_flag("--all", induce.all, "Induce every category");
  s_induce->add_option("--output", induce.output, "Keyword file (default stdout)");

  TrainInfOptions tinf;
  auto* s_tinf = app.add_subcommand("train-inf", "Train the informativeness classifier");
  s_tinf->add_option("--train", tinf.train, "Labeled training messages");
  s_tinf->add_option("--validation", tinf.validation, "Labeled validation messages");
  s_tinf->add_option("--model", tinf.model, "Model file to write");
  s_tinf->add_option("--trace", tinf.trace, "Loss trace CSV");
  s_tinf->add_option("--epochs", tinf.epochs, "Maximum epochs");
  s_tinf->add_option("--batch", tinf.batch, "Minibatch size");
  s_tinf->add_option("--max-len", tinf.max_len, "Characters per message");
  s_tinf->add_option("--lr", tinf.lr, "Learning rate");
  s_tinf->add_option("--momentum", tinf.momentum, "Momentum");
  s_tinf->add_option("--ccsid-weight", tinf.ccsid_weight, "Loss weight of CCSID examples");

  TrainActOptions tact;
  auto* s_tact = app.add_subcommand("train-act", "Train the nine actionability classifiers");
  s_tact->add_option("--corpus", tact.corpus, "Action-labeled JSONL");
  s_tact->add_option("--model", tact.model, "Ensemble file to write");
  add_feature_options(s_tact, tact.features);
  add_svm_options(s_tact, tact.hp);

  TuneOptions tune;
  auto* s_tune = app.add_subcommand("tune", "Grid-search C and gamma for one category");
  s_tune->add_option("--corpus", tune.corpus, "Action-labeled JSONL");
  s_tune->add_option("--category", tune.category, "Category code or name");
  s_tune->add_option("--folds", tune.folds, "Cross-validation folds");
  s_tune->add_option("--C-grid", tune.c_grid, "Comma-separated C values");
  s_tune->add_option("--gamma-grid", tune.gamma_grid, "Comma-separated gamma values");
  s_tune->add_option("--output", tune.output, "Heatmap CSV (default stdout)");
  add_feature_options(s_tune, tune.features);

  ClassifyOptions cls;
  auto* s_cls = app.add_subcommand("classify", "Gate and tag a message stream");
  s_cls->add_option("--input", cls.input, "Message JSONL");
  s_cls->add_option("--inf-model", cls.inf_model, "Informativeness model file");
  s_cls->add_option("--act-model", cls.act_model, "Actionability ensemble file");
  s_cls->add_option("--embeddings", cls.embeddings, "Word vector file");
  s_cls->add_option("--dim", cls.dim, "Embedding dimension");
  s_cls->add_option("--threshold", cls.threshold, "Informativeness threshold in (0,1)");
  s_cls->add_option("--chunk", cls.chunk, "Messages per parallel batch");
  s_cls->add_option("--output", cls.output, "Output JSONL (default stdout)");

  EvaluateOptions ev;
  auto* s_ev = app.add_subcommand("evaluate", "Score models and render the per-category table");
  s_ev->add_option("--act-model", ev.act_model, "Ensemble for held-out evaluation");
  s_ev->add_option("--test", ev.test, "Held-out action-labeled JSONL");
  s_ev->add_option("--corpus", ev.corpus, "Action-labeled JSONL for cross-validation");
  s_ev->add_option("--folds", ev.folds, "Cross-validate with this many folds");
  s_ev->add_option("--inf-model", ev.inf_model, "Evaluate an informativeness model instead");
  s_ev->add_option("--labeled", ev.labeled, "Labeled messages for --inf-model");
  s_ev->add_option("--threshold", ev.threshold, "Informativeness threshold");
  s_ev->add_option("--table", ev.table_out, "Text table (default stdout)");
  s_ev->add_option("--csv", ev.csv_out, "CSV twin of the table");
  add_feature_options(s_ev, ev.features);
  add_svm_options(s_ev, ev.hp);

  ProfileOptions prof;
  auto* s_prof = app.add_subcommand("profile", "Chart the composition of actionable messages");
  s_prof->add_option("--tagged", prof.tagged, "Action-labeled JSONL with timestamps");
  s_prof->add_option("--classified", prof.classified, "classify output");
  s_prof->add_option("--messages", prof.messages, "Messages with timestamps for --classified");
  s_prof->add_option("--width", prof.width, "Bucket width in seconds");
  s_prof->add_option("--svg", prof.svg, "Chart file");
  s_prof->add_option("--csv", prof.csv, "Proportions CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Context ctx{common, out, err};
  try {
    if (!common.config.empty()) {
      const auto kv = read_config(common.config);
      apply_config(app, kv);
      apply_config(*sub, kv);
    }
    if (common.threads < 0) throw UsageError("--threads must not be negative");
    if (sub == s_ingest) return cmd_ingest(ingest, ctx);
    if (sub == s_adj) return cmd_adjudicate(adj, ctx);
    if (sub == s_split) return cmd_split(split, ctx);
    if (sub == s_induce) return cmd_induce(induce, ctx);
    if (sub == s_tinf) return cmd_train_inf(tinf, ctx);
    if (sub == s_tact) return cmd_train_act(tact, ctx);
    if (sub == s_tune) return cmd_tune(tune, ctx);
    if (sub == s_cls) return cmd_classify(cls, ctx);
    if (sub == s_ev) return cmd_evaluate(ev, ctx);
    return cmd_profile(prof, ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace triage::cli
