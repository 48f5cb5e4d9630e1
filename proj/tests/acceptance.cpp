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

// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "triage/actionability.hpp"
#include "triage/corpus.hpp"
#include "triage/evaluation.hpp"
#include "triage/features.hpp"
#include "triage/informativeness.hpp"
#include "triage/pipeline.hpp"
#include "triage/profile.hpp"

namespace fs = std::filesystem;
using namespace triage;

namespace {

struct Outcome {
  enum Kind { Pass, Fail, Skip } kind = Pass;
  std::string detail;
};

Outcome fail(std::string why) { return {Outcome::Fail, std::move(why)}; }

std::string num(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- 1

Outcome feature_formula() {
  text::EmbeddingTable table(2);
  const std::vector<double> key = {1, 0}, hit = {0.6, 0.8}, orth = {0, 1};
  table.add("bridge", key);
  table.add("span", hit);
  table.add("noise", orth);
  const features::KeywordList list{ActionabilityType::AccessibilityChange, {"bridge"}};
  text::TokenSequence ten = {"span"};
  for (int i = 0; i < 9; ++i) ten.push_back("noise");
  const double a = features::vectorize(ten, list, table).values.at(0);
  if (std::abs(a - 0.06) > 1e-9) return fail("ten-token case gave " + num(a, 17));

  text::EmbeddingTable t4(2);
  t4.add("bridge", key);
  t4.add("half", std::vector<double>{0.5, std::sqrt(0.75)});
  t4.add("most", std::vector<double>{0.8, 0.6});
  t4.add("low", std::vector<double>{0.3, std::sqrt(0.91)});
  t4.add("none", orth);
  const double b =
      features::vectorize({"half", "most", "low", "none"}, list, t4).values.at(0);
  if (std::abs(b - 0.325) > 1e-9) return fail("four-token case gave " + num(b, 17));
  return {Outcome::Pass, "0.06 and 0.325 reproduced"};
}

// ---------------------------------------------------------------- 2

Outcome adjudication_oracle() {
  const std::array<InformativenessLabel, 3> labels = {InformativenessLabel::NotInformative,
                                                      InformativenessLabel::SomewhatInformative,
                                                      InformativenessLabel::Informative};
  std::size_t checked = 0;
  for (int code = 0; code < 243; ++code) {
    std::vector<InformativenessLabel> js;
    for (int i = 0, c = code; i < 5; ++i, c /= 3) js.push_back(labels[c % 3]);
    const auto got = corpus::adjudicate(js);
    if (got != oracle::majority(js))
      return fail("combination " + std::to_string(code) + " disagrees with the oracle");
    ++checked;
  }
  return {Outcome::Pass, std::to_string(checked) + " combinations match"};
}

// ---------------------------------------------------------------- 3

Outcome smo_correctness() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coord(0, 1);
  const std::array<double, 3> Cs = {1, 5, 20};
  const std::array<double, 2> gammas = {0.5, 3};
  double worst = 0;
  std::size_t instances = 0;
  while (instances < 30) {
    const std::size_t n = 2 + rng() % 5;
    const std::size_t d = 2 + rng() % 2;
    std::vector<std::vector<double>> X(n, std::vector<double>(d));
    std::vector<int> y(n);
    for (auto& x : X)
      for (auto& v : x) v = coord(rng);
    for (auto& v : y) v = rng() % 2 ? 1 : -1;
    if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), -1) == 0)
      continue;
    actionability::SvmHyperparams hp;
    hp.C = Cs[instances % 3];
    hp.gamma = gammas[instances % 2];
    const auto res = actionability::train_svm_detailed(X, y, hp, instances);
    const auto ref = oracle::brute_force_dual(X, y, hp.C, hp.gamma);
    const double w = actionability::dual_objective(res.alphas, X, y, hp.gamma);
    worst = std::max(worst, std::abs(w - ref.objective));
    if (std::abs(w - ref.objective) > 1e-3)
      return fail("instance " + std::to_string(instances) + ": objective " + num(w) +
                  " vs oracle " + num(ref.objective));
    for (std::size_t i = 0; i < n; ++i) {
      const int mine = actionability::classify_one(res.model, X[i]).label;
      const int theirs = oracle::oracle_decision(ref, X, y, hp.gamma, X[i]) >= 0 ? 1 : -1;
      if (mine != theirs)
        return fail("instance " + std::to_string(instances) + ": prediction differs at point " +
                    std::to_string(i));
    }
    ++instances;
  }

  // XOR: four corners, five jittered copies each.
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  std::normal_distribution<double> jitter(0, 0.05);
  for (int copy = 0; copy < 5; ++copy)
    for (int corner = 0; corner < 4; ++corner) {
      const double a = corner & 1, b = (corner >> 1) & 1;
      X.push_back({a + jitter(rng), b + jitter(rng)});
      y.push_back((corner == 1 || corner == 2) ? 1 : -1);
    }
  const auto model = actionability::train_svm(X, y, {}, 7);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < X.size(); ++i)
    correct += actionability::classify_one(model, X[i]).label == y[i];
  if (correct != X.size())
    return fail("XOR training accuracy " + std::to_string(correct) + "/" +
                std::to_string(X.size()));
  return {Outcome::Pass, std::to_string(instances) + " instances, max |dW| " + num(worst, 3) +
                             ", XOR 20/20"};
}

// ---------------------------------------------------------------- 4

Outcome gradient_check() {
  auto cfg = testing::small_cnn_config();
  cfg.max_len = 24;
  cfg.conv = {{4, 3, 2}, {4, 2, 2}};
  cfg.hidden = {8};
  cfg.seed = 3;
  const auto model = informativeness::init_model(cfg);
  const text::Alphabet alphabet(cfg.alphabet);
  const auto chars = text::quantize_chars("flood on 5th ave, need help!", alphabet, cfg.max_len);
  const auto ok = informativeness::gradient_check(model, chars, BinaryInformativeness::Informative);
  if (!(ok.max_relative_error < 1e-4))
    return fail("max relative error " + num(ok.max_relative_error));
  const auto bad = informativeness::gradient_check(
      model, chars, BinaryInformativeness::Informative, 1e-5, [](informativeness::Gradients& g) {
        for (auto& t : g)
          for (auto& v : t) v = -v;
      });
  if (bad.max_relative_error < 1e-4)
    return fail("sign-flipped gradients passed the check (" + num(bad.max_relative_error) + ")");
  return {Outcome::Pass, "max rel err " + num(ok.max_relative_error, 3) + " over " +
                             std::to_string(ok.checked) + " params; sign flip gives " +
                             num(bad.max_relative_error, 3)};
}

// ---------------------------------------------------------------- 5

Outcome early_stopping() {
  // Training labels carry 30% noise, validation labels none. The signal is
  // learned first (validation below training), then the network memorizes
  // the noise and training loss falls below validation loss.
  auto cfg = testing::small_cnn_config();
  cfg.conv = {{16, 3, 2}, {16, 3, 2}};
  cfg.hidden = {32};
  cfg.max_epochs = 300;
  cfg.learning_rate = 0.1;
  cfg.batch_size = 4;
  cfg.seed = 5;
  const auto train_set = testing::xq_messages(64, 101, 0.3);
  const auto val_set = testing::xq_messages(64, 202, 0.0);
  const auto tr = informativeness::make_examples(train_set, cfg);
  const auto va = informativeness::make_examples(val_set, cfg);
  const auto result = informativeness::train(informativeness::init_model(cfg), tr, va);
  const auto& trace = result.trace;
  if (!trace.crossover_epoch) return fail("no loss crossover within " + std::to_string(cfg.max_epochs) + " epochs");
  const std::size_t cross = *trace.crossover_epoch;
  if (!(trace.selected_epoch < cross))
    return fail("selected epoch " + std::to_string(trace.selected_epoch) +
                " does not precede crossover " + std::to_string(cross));
  double best = 1e300;
  for (const auto& e : trace.epochs)
    if (e.epoch < cross) best = std::min(best, e.validation_loss);
  if (trace.epochs.at(trace.selected_epoch).validation_loss != best)
    return fail("selected checkpoint is not the validation minimum");
  if (informativeness::mean_loss(result.model, va) != best)
    return fail("returned model does not reproduce the selected validation loss");
  return {Outcome::Pass, "crossover at epoch " + std::to_string(cross) + ", selected epoch " +
                             std::to_string(trace.selected_epoch)};
}

// ---------------------------------------------------------------- 6

informativeness::CnnModel world_gate(const std::vector<testing::WorldMessage>& world) {
  auto cfg = testing::small_cnn_config();
  cfg.max_len = 64;
  cfg.max_epochs = 40;
  corpus::LabeledSet train;
  for (const auto& m : world) train.push_back({m.message, m.label});
  // Validating on the training set itself never triggers the crossover, so
  // the gate trains for the full epoch budget.
  const auto examples = informativeness::make_examples(train, cfg);
  return informativeness::train(informativeness::init_model(cfg), examples, examples).model;
}

Outcome gate_order() {
  const auto world = testing::world_messages(240, 31);
  const auto gate = world_gate(world);
  const auto table = testing::world_embeddings();
  std::vector<features::KeywordList> lists;
  for (auto t : kAllActionabilityTypes)
    lists.push_back({t, testing::category_words()[index_of(t)]});
  const auto ensemble =
      actionability::train_ensemble(testing::world_action_corpus(world), lists, table, {});
  const actionability::Tagger tagger(ensemble, table);

  std::set<std::string> accepted_texts, tagged_texts;
  std::mutex mu;
  const double threshold = 0.5;
  pipeline::Pipeline pipe(
      [&](std::string_view text) {
        const double p = informativeness::classify(gate, text).probability_informative;
        if (p >= threshold) {
          std::lock_guard lock(mu);
          accepted_texts.insert(std::string(text));
        }
        return p;
      },
      [&](std::string_view text) {
        std::lock_guard lock(mu);
        tagged_texts.insert(std::string(text));
        return tagger.tag(text);
      },
      threshold);

  const auto stream = testing::world_messages(200, 32);
  std::vector<Message> messages;
  for (const auto& m : stream) messages.push_back(m.message);
  const auto results = pipe.run_batch(messages, 2);

  std::size_t rejected = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].id != messages[i].id) return fail("output order differs from input order");
    if (!results[i].informative) {
      ++rejected;
      if (!results[i].actions.empty()) return fail("rejected message carries actions");
    }
  }
  const std::size_t accepted = results.size() - rejected;
  for (const auto& t : tagged_texts)
    if (!accepted_texts.count(t)) return fail("tagger saw a message the gate rejected: " + t);
  if (pipe.tagger_calls() != accepted)
    return fail("tagger ran " + std::to_string(pipe.tagger_calls()) + " times for " +
                std::to_string(accepted) + " accepted messages");
  if (rejected == 0 || accepted == 0)
    return fail("the gate did not split the stream (" + std::to_string(accepted) + " accepted)");
  return {Outcome::Pass, std::to_string(rejected) + " rejected, 0 tagger calls on them; " +
                             std::to_string(accepted) + " accepted and tagged"};
}

// ---------------------------------------------------------------- 7

Outcome baseline_reproduction() {
  const auto b = testing::baseline_corpus();
  std::vector<int> gold, base;
  std::vector<std::vector<double>> X;
  const features::Vectorizer vec(b.keywords, b.table);
  for (const auto& ex : b.examples) {
    gold.push_back(ex.actions.contains(ActionabilityType::AccessibilityChange) ? 1 : -1);
    base.push_back(actionability::keyword_baseline(ex.tokens, b.keywords));
    X.push_back(vec(ex.tokens).values);
  }
  const double base_f1 = evaluation::metrics(evaluation::confusion(base, gold)).f1;
  const double hand = oracle::f1_from_counts(10, 4, 10);  // = 10/17
  if (base_f1 != hand) return fail("baseline F1 " + num(base_f1, 17) + " vs hand " + num(hand, 17));

  const auto model = actionability::train_svm(X, gold, {}, 1);
  std::vector<int> pred;
  for (const auto& x : X) pred.push_back(actionability::classify_one(model, x).label);
  const double svm_f1 = evaluation::metrics(evaluation::confusion(pred, gold)).f1;
  if (svm_f1 < base_f1)
    return fail("SVM F1 " + num(svm_f1) + " below baseline " + num(base_f1));
  return {Outcome::Pass, "baseline F1 " + num(base_f1, 4) + " (= 10/17), SVM F1 " + num(svm_f1, 4)};
}

// ---------------------------------------------------------------- 8

Outcome profile_integrity() {
  const auto stream = testing::five_day_stream();
  const auto p = profile::build_profile(stream, 86400);
  if (p.buckets.size() != 5) return fail(std::to_string(p.buckets.size()) + " buckets, expected 5");

  // Counting oracle: day number straight from the timestamp.
  std::int64_t t_min = INT64_MAX;
  for (const auto& [m, _] : stream) t_min = std::min(t_min, *m.timestamp);
  std::vector<std::array<double, kActionabilityTypeCount>> counts(5);
  for (const auto& [m, tags] : stream)
    for (auto t : kAllActionabilityTypes)
      if (tags.contains(t)) counts[static_cast<std::size_t>((*m.timestamp - t_min) / 86400)][index_of(t)] += 1;

  const auto chart = profile::render_chart(p);
  const auto segs = oracle::svg_segments(chart.svg);
  const double H = profile::ChartOptions{}.bar_height;
  for (std::size_t b = 0; b < 5; ++b) {
    double total = 0, sum = 0, heights = 0;
    for (double c : counts[b]) total += c;
    for (std::size_t c = 0; c < kActionabilityTypeCount; ++c) {
      const double expect = counts[b][c] / total;
      sum += p.proportions[b][c];
      if (std::abs(p.proportions[b][c] - expect) > 1e-12)
        return fail("bucket " + std::to_string(b) + " category " + code_of(kAllActionabilityTypes[c]) +
                    " proportion differs from the counting oracle");
      const auto& bar = segs.count(static_cast<int>(b)) ? segs.at(static_cast<int>(b))
                                                        : std::map<char, double>{};
      const char code = code_of(kAllActionabilityTypes[c]);
      const double h = bar.count(code) ? bar.at(code) : 0.0;
      heights += h;
      if (std::abs(h - expect * H) > 0.5)
        return fail("segment " + std::string(1, code) + " of bar " + std::to_string(b) +
                    " is " + num(h) + " units, expected " + num(expect * H));
    }
    if (std::abs(sum - 1.0) > 1e-9) return fail("bucket " + std::to_string(b) + " sums to " + num(sum, 17));
    if (std::abs(heights - H) > 0.5) return fail("bar " + std::to_string(b) + " is not full height");
  }
  return {Outcome::Pass, "5 buckets match the counting oracle; bars full height within 0.5"};
}

// ---------------------------------------------------------------- 9

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_jsonl(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  for (const auto& l : lines) out << l << "\n";
}

std::string message_line(const Message& m, const std::string& extra) {
  nlohmann::json j;
  j["id"] = m.id;
  j["text"] = m.text;
  if (m.timestamp) j["timestamp"] = *m.timestamp;
  j["source"] = std::string(to_string(m.source));
  std::string s = j.dump();
  if (!extra.empty()) s.insert(s.size() - 1, "," + extra);
  return s;
}

// Writes the synthetic inputs of a full run into dir.
void write_world(const fs::path& dir) {
  fs::create_directories(dir);
  testing::write_world_embeddings(dir / "vectors.txt");
  const auto ccsid = testing::world_messages(400, 41);
  const auto lex = testing::world_messages(400, 42);
  std::vector<std::string> a, b, acts, stream;
  for (const auto& m : ccsid)
    a.push_back(message_line(m.message, "\"label\":\"" + std::string(to_string(m.label)) + "\""));
  for (auto m : lex) {
    m.message.source = Source::CrisisLex;
    b.push_back(message_line(m.message, "\"label\":\"" + std::string(to_string(m.label)) + "\""));
  }
  for (const auto& m : testing::world_messages(200, 43, 5, 1.0)) {
    nlohmann::json codes = m.actions.codes();
    acts.push_back(message_line(m.message, "\"actions\":" + codes.dump()));
  }
  for (const auto& m : testing::world_messages(150, 44)) stream.push_back(message_line(m.message, ""));
  write_jsonl(dir / "ccsid.jsonl", a);
  write_jsonl(dir / "crisislex.jsonl", b);
  write_jsonl(dir / "actions.jsonl", acts);
  write_jsonl(dir / "stream.jsonl", stream);
}

std::optional<std::string> full_run(const fs::path& dir, int threads) {
  const std::string d = dir.string() + "/";
  const std::vector<std::string> common = {"--seed", "17", "--threads", std::to_string(threads)};
  const std::vector<std::vector<std::string>> steps = {
      {"split", "--ccsid", d + "ccsid.jsonl", "--crisislex", d + "crisislex.jsonl",
       "--ccsid-validation", "20", "--crisislex-per-class", "10", "--train-out",
       d + "train.jsonl", "--validation-out", d + "validation.jsonl"},
      {"train-inf", "--train", d + "train.jsonl", "--validation", d + "validation.jsonl",
       "--model", d + "inf.model", "--trace", d + "trace.csv", "--epochs", "3", "--max-len", "48",
       "--batch", "16"},
      {"train-act", "--corpus", d + "actions.jsonl", "--embeddings", d + "vectors.txt", "--model",
       d + "act.model"},
      {"classify", "--input", d + "stream.jsonl", "--inf-model", d + "inf.model", "--act-model",
       d + "act.model", "--embeddings", d + "vectors.txt", "--threshold", "0.5", "--chunk", "32",
       "--output", d + "classified.jsonl"},
      {"profile", "--classified", d + "classified.jsonl", "--messages", d + "stream.jsonl",
       "--svg", d + "profile.svg", "--csv", d + "profile.csv"},
  };
  for (const auto& step : steps) {
    std::vector<std::string> args = common;
    args.insert(args.end(), step.begin(), step.end());
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) return step[0] + " exited " + std::to_string(code) + ": " + err.str();
  }
  return std::nullopt;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() /
                        ("triage-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  const fs::path r1 = root / "run1", r2 = root / "run2";
  write_world(r1);
  write_world(r2);
  if (auto e = full_run(r1, 1)) return fail("first run: " + *e + " (files in " + r1.string() + ")");
  if (auto e = full_run(r2, 2)) return fail("second run: " + *e);
  std::size_t compared = 0;
  for (const char* f : {"train.jsonl", "validation.jsonl", "inf.model", "trace.csv", "act.model",
                        "classified.jsonl", "profile.svg", "profile.csv"}) {
    const auto a = slurp(r1 / f), b = slurp(r2 / f);
    if (a.empty()) return fail(std::string(f) + " is empty");
    if (a != b) return fail(std::string(f) + " differs between runs");
    ++compared;
  }
  if (!std::getenv("TRIAGE_KEEP_TMP")) fs::remove_all(root);
  return {Outcome::Pass, std::to_string(compared) + " artifacts byte-identical (1 vs 2 threads)"};
}

// ---------------------------------------------------------------- 10

Outcome crisislex_scale() {
  const char* path = std::getenv("TRIAGE_CRISISLEX_CSV");
  if (!path || !*path || !fs::exists(path))
    return {Outcome::Skip, "set TRIAGE_CRISISLEX_CSV to a labeled CrisisLex CSV to run"};
  const auto loaded = corpus::load_crisislex_csv(path);
  const auto messages = corpus::dedupe([&] {
    MessageSet m;
    for (const auto& r : loaded.records) m.push_back(r.message);
    return m;
  }());
  std::map<std::string, BinaryInformativeness> label_of_id;
  for (const auto& r : loaded.records) label_of_id[r.message.id] = r.label;
  std::array<corpus::LabeledSet, 2> by_class;
  for (const auto& m : messages) {
    const auto l = label_of_id.at(m.id);
    by_class[static_cast<std::size_t>(l)].push_back({m, l});
  }
  const std::size_t held = 150;
  if (by_class[0].size() < held * 2 || by_class[1].size() < held * 2)
    return fail("too few messages per class for a 150/150 held-out slice");
  corpus::LabeledSet train, val, test;
  std::mt19937_64 rng(derive_seed(1, "crisislex-check"));
  for (auto& cls : by_class) {
    std::shuffle(cls.begin(), cls.end(), rng);
    test.insert(test.end(), cls.begin(), cls.begin() + held);
    // 10% scale: a tenth of what remains, a fifth of that kept for validation.
    const std::size_t rest = cls.size() - held;
    const std::size_t take = std::max<std::size_t>(rest / 10, 10);
    const std::size_t nval = std::max<std::size_t>(take / 5, 5);
    val.insert(val.end(), cls.begin() + held, cls.begin() + held + nval);
    train.insert(train.end(), cls.begin() + held + nval, cls.begin() + held + take);
  }
  informativeness::CnnConfig cfg;
  cfg.max_epochs = 12;
  const auto result = informativeness::train(informativeness::init_model(cfg),
                                             informativeness::make_examples(train, cfg),
                                             informativeness::make_examples(val, cfg));
  std::size_t correct = 0;
  for (const auto& m : test)
    correct += informativeness::classify(result.model, m.message.text).decision == m.label;
  const double acc = static_cast<double>(correct) / static_cast<double>(test.size());
  if (acc < 0.8) return fail("held-out accuracy " + num(acc, 4));
  return {Outcome::Pass, "held-out accuracy " + num(acc, 4) + " on " +
                             std::to_string(test.size()) + " balanced messages"};
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "feature formula fidelity", 1, feature_formula},
      {2, "adjudication oracle", 1, adjudication_oracle},
      {3, "SMO correctness", 30, smo_correctness},
      {4, "gradient check", 60, gradient_check},
      {5, "early stopping", 120, early_stopping},
      {6, "end-to-end gate order", 0, gate_order},
      {7, "baseline reproduction", 0, baseline_reproduction},
      {8, "profile integrity", 0, profile_integrity},
      {9, "determinism", 0, determinism},
      {10, "CrisisLex 10% scale", 900, crisislex_scale},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.kind == Outcome::Pass && c.budget_seconds > 0 && secs > c.budget_seconds)
      o = fail("took " + num(secs, 3) + " s, budget " + num(c.budget_seconds) + " s");
    const char* tag = o.kind == Outcome::Pass ? "PASS" : o.kind == Outcome::Skip ? "SKIP" : "FAIL";
    std::cout << "[" << tag << "] " << c.number << ". " << c.name << ": " << o.detail << " ("
              << num(secs, 3) << " s)" << std::endl;
    failures += o.kind == Outcome::Fail;
  }
  return failures == 0 ? 0 : 1;
}
