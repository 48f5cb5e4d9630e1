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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "triage/error.hpp"
#include "triage/features.hpp"

using namespace triage;
using namespace triage::features;

namespace {

text::EmbeddingTable unit_circle_table() {
  // "kw" points along x; every other word sits at a known angle from it.
  text::EmbeddingTable t(2);
  auto add = [&](const char* w, double cos) {
    const std::vector<double> v{cos, std::sqrt(1 - cos * cos)};
    t.add(w, v);
  };
  add("kw", 1.0);
  add("s60", 0.6);
  add("s50", 0.5);
  add("s80", 0.8);
  add("s30", 0.3);
  add("s00", 0.0);
  return t;
}

const KeywordList kList{ActionabilityType::AccessibilityChange, {"kw"}};

}  // namespace

TEST_CASE("vectorize worked examples") {
  const auto t = unit_circle_table();
  text::TokenSequence ten{"s60"};
  for (int i = 0; i < 9; ++i) ten.push_back("unknown" + std::to_string(i));
  CHECK(vectorize(ten, kList, t).values[0] == doctest::Approx(0.06).epsilon(1e-12));

  CHECK(vectorize({"s30", "s00", "zzz"}, kList, t).values[0] == 0.0);

  const text::TokenSequence four{"s50", "s80", "s30", "s00"};
  CHECK(vectorize(four, kList, t).values[0] == doctest::Approx(0.325).epsilon(1e-12));
}

TEST_CASE("vectorize denominator policy") {
  const auto t = unit_circle_table();
  FeatureConfig embedded_only;
  embedded_only.denominator = DenominatorPolicy::EmbeddedTokensOnly;
  const text::TokenSequence doc{"s80", "nope", "nada", "s00"};
  CHECK(vectorize(doc, kList, t).values[0] == doctest::Approx(0.2));
  CHECK(vectorize(doc, kList, t, embedded_only).values[0] == doctest::Approx(0.4));
}

TEST_CASE("vectorize errors and diagnostics") {
  const auto t = unit_circle_table();
  CHECK_THROWS_AS(vectorize({}, kList, t), InvalidArgument);
  FeatureConfig bad;
  bad.cutoff = 1.0;
  CHECK_THROWS_AS(vectorize({"kw"}, kList, t, bad), InvalidArgument);

  VectorizeDiagnostics diag;
  const KeywordList with_missing{ActionabilityType::Needs, {"kw", "absent"}};
  const auto fv = vectorize({"kw"}, with_missing, t, {}, &diag);
  REQUIRE(fv.values.size() == 2);
  CHECK(fv.values[1] == 0.0);
  CHECK(diag.missing_keywords == std::vector<std::string>{"absent"});
}

TEST_CASE("vectorize properties on random tables") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0, 1);
  text::EmbeddingTable t(5);
  std::vector<std::string> vocab;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> v(5);
    for (auto& x : v) x = g(rng);
    vocab.push_back("w" + std::to_string(i));
    t.add(vocab.back(), v);
  }
  const KeywordList kws{ActionabilityType::Needs, {"w0", "w1", "w2", "w3"}};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() + 4), len(1, 25);
  FeatureConfig strict;
  strict.cutoff = 0.7;
  for (int trial = 0; trial < 300; ++trial) {
    text::TokenSequence doc;
    const auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = pick(rng);
      doc.push_back(k < vocab.size() ? vocab[k] : "oov");
    }
    const auto a = vectorize(doc, kws, t);
    auto shuffled = doc;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto b = vectorize(shuffled, kws, t);
    const auto c = vectorize(doc, kws, t, strict);
    REQUIRE(a.values.size() == kws.keywords.size());
    for (std::size_t j = 0; j < a.values.size(); ++j) {
      CHECK(a.values[j] >= 0.0);
      CHECK(a.values[j] <= 1.0);
      CHECK(std::abs(a.values[j] - b.values[j]) <= 1e-12);
      CHECK(c.values[j] <= a.values[j]);
    }
  }
}

TEST_CASE("induce_keywords ranks a discriminative word first") {
  // 20 documents: 10 positives, 9 of which mention "bridge"; "the" appears in
  // every document; "game" only in negatives.
  std::vector<TokenizedExample> corpus;
  for (int i = 0; i < 10; ++i)
    corpus.push_back({{"the", i < 9 ? "bridge" : "closed", "out"},
                      {ActionabilityType::AccessibilityChange}});
  for (int i = 0; i < 10; ++i) corpus.push_back({{"the", "game", "out"}, {}});
  InductionOptions opt;
  opt.k = 2;
  const auto r = induce_keywords(corpus, ActionabilityType::AccessibilityChange, opt);
  REQUIRE(r.list.keywords.size() == 2);
  CHECK(r.list.keywords[0] == "bridge");
  // "the" and "out" are balanced: score exactly zero with equal class sizes.
  const auto& second = r.ranked[1];
  CHECK(second.score == doctest::Approx(0.0));
  CHECK(second.word == "out");
  CHECK_FALSE(r.short_list);
}

TEST_CASE("induce_keywords matches a brute-force ratio oracle") {
  std::mt19937_64 rng(12);
  const std::vector<std::string> vocab{"alpha", "beta", "gamma", "delta", "eps", "zeta",
                                       "eta",   "theta", "iota", "kappa", "#tag", "@who"};
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<std::size_t> w(0, vocab.size() - 1), len(1, 8), ndocs(2, 50);
    std::bernoulli_distribution positive(0.4);
    std::vector<TokenizedExample> corpus;
    const auto n = ndocs(rng);
    for (std::size_t d = 0; d < n; ++d) {
      TokenizedExample ex;
      for (std::size_t i = 0, L = len(rng); i < L; ++i) ex.tokens.push_back(vocab[w(rng)]);
      if (d == 0 || (d > 1 && positive(rng))) ex.actions.insert(ActionabilityType::Needs);
      corpus.push_back(ex);
    }
    // Oracle.
    std::map<std::string, double> pos, neg;
    double npos = 0, nneg = 0;
    for (const auto& ex : corpus)
      for (const auto& t : ex.tokens) {
        if (ex.actions.contains(ActionabilityType::Needs)) {
          pos[t] += 1;
          npos += 1;
        } else {
          neg[t] += 1;
          nneg += 1;
        }
      }
    std::map<std::string, int> vocab_seen;
    for (const auto& [k, v] : pos) vocab_seen[k] = 1;
    for (const auto& [k, v] : neg) vocab_seen[k] = 1;
    const double V = static_cast<double>(vocab_seen.size());
    std::vector<std::pair<double, std::string>> expect;
    for (const auto& [word, _] : vocab_seen) {
      if (pos[word] + neg[word] < 3 || word[0] == '#' || word[0] == '@') continue;
      const double s = std::log((pos[word] + 1) / (npos + V)) - std::log((neg[word] + 1) / (nneg + V));
      expect.push_back({-s, word});
    }
    std::sort(expect.begin(), expect.end());

    InductionOptions opt;
    opt.k = 5;
    const auto got = induce_keywords(corpus, ActionabilityType::Needs, opt);
    const std::size_t m = std::min<std::size_t>(5, expect.size());
    CHECK(got.short_list == (expect.size() < 5));
    REQUIRE(got.ranked.size() == m);
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(got.ranked[i].score == doctest::Approx(-expect[i].first).epsilon(1e-12));
      // Ties can only reorder words whose scores agree to rounding.
      if (got.ranked[i].word != expect[i].second)
        CHECK(std::abs(got.ranked[i].score + expect[i].first) < 1e-12);
    }
  }
}

TEST_CASE("induce_keywords errors") {
  std::vector<TokenizedExample> only_pos{{{"a"}, {ActionabilityType::Needs}}};
  CHECK_THROWS_AS(induce_keywords(only_pos, ActionabilityType::Needs), DataError);
  InductionOptions zero;
  zero.k = 0;
  CHECK_THROWS_AS(induce_keywords(only_pos, ActionabilityType::Needs, zero), InvalidArgument);
}

TEST_CASE("keyword files round trip") {
  const auto defaults = default_keyword_lists();
  REQUIRE_FALSE(defaults.empty());
  const auto* access = find_list(defaults, ActionabilityType::AccessibilityChange);
  REQUIRE(access != nullptr);
  CHECK(std::find(access->keywords.begin(), access->keywords.end(), "bridge") !=
        access->keywords.end());
  CHECK(std::find(access->keywords.begin(), access->keywords.end(), "g") == access->keywords.end());

  const auto text = format_keyword_lists(defaults);
  const auto back = parse_keyword_lists(text);
  REQUIRE(back.size() == defaults.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].category == defaults[i].category);
    CHECK(back[i].keywords == defaults[i].keywords);
  }

  const auto parsed = parse_keyword_lists("[D Accessibility]\nBridge road\nroad blocked\n");
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].keywords == std::vector<std::string>{"bridge", "road", "blocked"});
  CHECK_THROWS_AS(parse_keyword_lists("[D Accessibility\nbridge\n"), DataError);
  CHECK_THROWS_AS(parse_keyword_lists("bridge\n"), DataError);
}
