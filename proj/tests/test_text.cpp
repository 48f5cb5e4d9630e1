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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "triage/error.hpp"
#include "triage/text.hpp"

using namespace triage;
using namespace triage::text;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / ("triage-test-" + name);
  std::ofstream(p) << content;
  return p;
}

std::string vector_line(const std::string& word, std::size_t d, double base = 0.1) {
  std::string s = word;
  for (std::size_t i = 0; i < d; ++i) s += " " + std::to_string(base + 0.01 * i);
  return s + "\n";
}

}  // namespace

TEST_CASE("tokenize examples") {
  CHECK(tokenize("Bridge OUT on 5th! #irma") ==
        TokenSequence{"bridge", "out", "on", "5th", "!", "#irma"});
  CHECK(tokenize("@redcross help http://t.co/x") ==
        TokenSequence{"@redcross", "help", "http://t.co/x"});
  CHECK(tokenize(":-) safe now") == TokenSequence{":-)", "safe", "now"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n ").empty());
}

TEST_CASE("tokenize keeps URL case and lowercases everything else") {
  const auto t = tokenize("See HTTPS://Example.com/A NOW");
  REQUIRE(t.size() == 3);
  CHECK(t[0] == "see");
  CHECK(t[1] == "HTTPS://Example.com/A");
  CHECK(t[2] == "now");
}

TEST_CASE("tokens never contain whitespace and are never empty") {
  std::mt19937_64 rng(3);
  const std::string pool = "abc XYZ 12 #@:;-)(!?.,\t\nhttp://";
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), len(0, 60);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    const auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) s += pool[pick(rng)];
    for (const auto& tok : tokenize(s)) {
      CHECK_FALSE(tok.empty());
      CHECK(tok.find_first_of(" \t\n\r") == std::string::npos);
    }
  }
}

TEST_CASE("token classifiers") {
  CHECK(is_url("http://t.co/x"));
  CHECK(is_url("https://a.b"));
  CHECK_FALSE(is_url("help"));
  CHECK(is_mention("@redcross"));
  CHECK_FALSE(is_mention("@"));
  CHECK(is_hashtag("#irma"));
  CHECK_FALSE(is_hashtag("irma"));
}

TEST_CASE("quantize_chars examples") {
  const Alphabet abc("abc");
  CHECK(quantize_chars("ab", abc, 4) == CharSequence{1, 2, 0, 0});
  CHECK(quantize_chars("ABC", abc, 4) == CharSequence{1, 2, 3, 0});
  CHECK(quantize_chars("azb", abc, 3) == CharSequence{1, 0, 2});

  const std::string long_text(300, 'b');
  const auto q = quantize_chars(long_text + "a", abc, 280);
  CHECK(q.size() == 280);
  CHECK(std::all_of(q.begin(), q.end(), [](auto v) { return v == 2; }));
}

TEST_CASE("quantize_chars length and index range") {
  const auto alpha = Alphabet::standard();
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> byte(1, 255), len(0, 400);
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s += static_cast<char>(byte(rng));
    const auto q = quantize_chars(s, alpha, 100);
    REQUIRE(q.size() == 100);
    for (auto v : q) CHECK(v <= alpha.size());
  }
}

TEST_CASE("quantize_chars rejects bad arguments") {
  CHECK_THROWS_AS(Alphabet(""), InvalidArgument);
  CHECK_THROWS_AS(quantize_chars("x", Alphabet("x"), 0), InvalidArgument);
}

TEST_CASE("standard alphabet") {
  const auto a = Alphabet::standard();
  CHECK(a.index('a') == 1);
  CHECK(a.index(' ') > 0);
  CHECK(a.index('0') > 0);
  CHECK(a.index(U'é') == 0);
}

TEST_CASE("load_embeddings") {
  SUBCASE("25-dimensional entry") {
    const auto p = temp_file("emb-ok.txt", vector_line("flood", 25) + vector_line("Water", 25));
    const auto t = load_embeddings(p, 25);
    CHECK(t.size() == 2);
    REQUIRE(t.lookup("flood"));
    CHECK(t.lookup("flood")->size() == 25);
    CHECK(t.lookup("FLOOD"));
    CHECK(t.lookup("water"));
  }
  SUBCASE("short line names its line number") {
    const auto p = temp_file("emb-short.txt", vector_line("a", 25) + vector_line("b", 24));
    try {
      load_embeddings(p, 25);
      FAIL("expected a dimension error");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
  }
  SUBCASE("non-numeric component") {
    const auto p = temp_file("emb-nan.txt", "a 0.1 zz 0.3\n");
    CHECK_THROWS_AS(load_embeddings(p, 3), DataError);
  }
  SUBCASE("empty file") {
    const auto p = temp_file("emb-empty.txt", "");
    CHECK(load_embeddings(p, 25).empty());
  }
  SUBCASE("duplicates keep the first vector") {
    const auto p = temp_file("emb-dup.txt", "a 1 0\na 0 1\n");
    const auto t = load_embeddings(p, 2);
    CHECK(t.size() == 1);
    CHECK((*t.lookup("a"))[0] == 1.0);
  }
  SUBCASE("word2vec count header is skipped") {
    const auto p = temp_file("emb-header.txt", "2 2\na 1 0\nb 0 1\n");
    CHECK(load_embeddings(p, 2).size() == 2);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_embeddings("/nonexistent/vectors.txt", 25), DataError);
  }
}

TEST_CASE("cosine examples") {
  const std::vector<double> u{3, 4};
  CHECK(cosine(u, u) == doctest::Approx(1.0));
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{-1, 0}) == -1.0);
  CHECK_THROWS_AS(cosine(std::vector<double>{0, 0}, u), InvalidArgument);
  CHECK_THROWS_AS(cosine(std::vector<double>{1}, u), InvalidArgument);
}

TEST_CASE("cosine symmetry, scale invariance and range") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0, 1);
  std::uniform_real_distribution<double> scale(0.01, 100);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> u(7), v(7);
    for (auto& x : u) x = g(rng);
    for (auto& x : v) x = g(rng);
    const double c = cosine(u, v);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    CHECK(std::abs(c - cosine(v, u)) <= 1e-12);
    const double a = scale(rng);
    auto au = u;
    for (auto& x : au) x *= a;
    CHECK(std::abs(cosine(au, v) - c) <= 1e-12);
  }
}
