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
#include <random>

#include "support/oracles.hpp"
#include "triage/error.hpp"
#include "triage/evaluation.hpp"

using namespace triage;
using namespace triage::evaluation;

TEST_CASE("confusion examples") {
  CHECK(confusion(std::vector<int>{1, -1}, std::vector<int>{1, -1}) == Confusion{1, 0, 1, 0});
  CHECK(confusion(std::vector<int>{1, 1}, std::vector<int>{1, -1}) == Confusion{1, 1, 0, 0});
  const std::vector<int> neg(7, -1), pos(7, 1);
  CHECK(confusion(neg, pos).fn == 7);
  CHECK_THROWS_AS(confusion(std::vector<int>{1}, std::vector<int>{1, 1}), InvalidArgument);
  CHECK_THROWS_AS(confusion(std::vector<int>{}, std::vector<int>{}), InvalidArgument);
  CHECK_THROWS_AS(confusion(std::vector<int>{0}, std::vector<int>{1}), InvalidArgument);
}

TEST_CASE("metrics examples") {
  const auto perfect = metrics(Confusion{3, 0, 2, 0});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  const auto m = metrics(Confusion{1, 0, 0, 1});
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 0.5);
  CHECK(m.f1 == 2.0 / 3.0);
  CHECK(m.accuracy == 0.5);

  const auto none = metrics(Confusion{0, 0, 5, 0});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK_THROWS_AS(metrics(Confusion{}), InvalidArgument);
}

TEST_CASE("metrics properties") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> n(1, 60), bit(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> p, g;
    for (int i = 0, L = n(rng); i < L; ++i) {
      p.push_back(bit(rng) ? 1 : -1);
      g.push_back(bit(rng) ? 1 : -1);
    }
    const auto c = confusion(p, g);
    const auto m = metrics(c);
    for (double v : {m.accuracy, m.precision, m.recall, m.f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    if (m.precision + m.recall > 0) {
      CHECK(m.f1 >= std::min(m.precision, m.recall) - 1e-15);
      CHECK(m.f1 <= std::max(m.precision, m.recall) + 1e-15);
    }
    CHECK(m.f1 == oracle::f1_from_counts(c.tp, c.fp, c.fn));

    std::vector<std::size_t> order(p.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> p2, g2;
    for (auto i : order) {
      p2.push_back(p[i]);
      g2.push_back(g[i]);
    }
    CHECK(confusion(p2, g2) == c);
  }
}

TEST_CASE("percent formatting") {
  CHECK(percent(0.575) == "57.50%");
  CHECK(percent(0.6683) == "66.83%");
  CHECK(percent(1.0) == "100.00%");
  CHECK(percent(0.0) == "0.00%");
}

TEST_CASE("report_table") {
  std::vector<CategoryRow> rows;
  for (auto t : kAllActionabilityTypes) {
    CategoryRow r;
    r.category = t;
    r.model = {0.6683, 0.5, 0.6301, 0.575};
    r.baseline_f1 = t == ActionabilityType::GeographicMention ? 0.9 : 0.4521;
    rows.push_back(r);
  }
  std::reverse(rows.begin(), rows.end());
  const auto out = report_table(rows, Protocol::CrossValidation);

  CHECK(out.table.find("Protocol: cross-validation") != std::string::npos);
  const auto needs = out.table.find("A Needs");
  REQUIRE(needs != std::string::npos);
  CHECK(out.table.find("66.83%", needs) != std::string::npos);
  CHECK(out.table.find("57.50%", needs) != std::string::npos);
  CHECK(out.table.find("45.21%", needs) != std::string::npos);
  // Rows appear in A..I order.
  std::size_t last = 0;
  for (auto t : kAllActionabilityTypes) {
    const auto at = out.table.find(std::string("\n") + code_of(t) + " ");
    REQUIRE(at != std::string::npos);
    CHECK(at > last);
    last = at;
  }
  // A baseline above the model is printed as is.
  CHECK(out.table.find("90.00%") != std::string::npos);

  CHECK(out.csv.rfind("category,accuracy,f1,recall,baseline_f1\n", 0) == 0);
  CHECK(std::count(out.csv.begin(), out.csv.end(), '\n') == 10);
  CHECK(out.csv.find("\nA,0.668300,0.575000,0.630100,0.452100\n") != std::string::npos);

  rows.pop_back();
  CHECK_THROWS_AS(report_table(rows, Protocol::HeldOut), InvalidArgument);
  rows.push_back(rows.front());
  CHECK_THROWS_AS(report_table(rows, Protocol::HeldOut), InvalidArgument);
}
