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

#include "triage/evaluation.hpp"

#include <array>
#include <cstdio>
#include <optional>
#include <sstream>

#include "triage/error.hpp"

namespace triage::evaluation {

Confusion& Confusion::operator+=(const Confusion& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

Confusion confusion(std::span<const int> predictions, std::span<const int> golds) {
  if (predictions.size() != golds.size())
    throw InvalidArgument("confusion: " + std::to_string(predictions.size()) +
                          " predictions for " + std::to_string(golds.size()) + " gold labels");
  if (predictions.empty()) throw InvalidArgument("confusion: no instances");
  Confusion c;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const int p = predictions[i], g = golds[i];
    if ((p != 1 && p != -1) || (g != 1 && g != -1))
      throw InvalidArgument("confusion: labels must be +1 or -1");
    if (p == 1)
      ++(g == 1 ? c.tp : c.fp);
    else
      ++(g == 1 ? c.fn : c.tn);
  }
  return c;
}

MetricsReport metrics(const Confusion& c) {
  if (c.total() == 0) throw InvalidArgument("metrics: empty confusion matrix");
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  MetricsReport m;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  // 2PR / (P + R) reduced to counts, which avoids two rounding steps.
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return m;
}

std::string_view to_string(Protocol p) {
  return p == Protocol::HeldOut ? "held-out" : "cross-validation";
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", fraction * 100.0);
  return buf;
}

RenderedReport report_table(std::span<const CategoryRow> rows, Protocol protocol) {
  std::array<std::optional<CategoryRow>, kActionabilityTypeCount> ordered;
  for (const auto& r : rows) {
    auto& slot = ordered[index_of(r.category)];
    if (slot)
      throw InvalidArgument(std::string("report_table: category ") + code_of(r.category) +
                            " appears twice");
    slot = r;
  }
  for (auto t : kAllActionabilityTypes)
    if (!ordered[index_of(t)])
      throw InvalidArgument(std::string("report_table: missing category ") + code_of(t) + " " +
                            std::string(name_of(t)));

  RenderedReport out;
  std::ostringstream table, csv;
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s %10s %10s %10s %12s\n", "Category", "Accuracy", "F1",
                "Recall", "Baseline-F1");
  table << "Protocol: " << to_string(protocol) << "\n" << line;
  csv << "category,accuracy,f1,recall,baseline_f1\n";
  for (const auto& r : ordered) {
    const std::string name = std::string(1, code_of(r->category)) + " " +
                             std::string(label_of(r->category));
    std::snprintf(line, sizeof(line), "%-28s %10s %10s %10s %12s\n", name.c_str(),
                  percent(r->model.accuracy).c_str(), percent(r->model.f1).c_str(),
                  percent(r->model.recall).c_str(), percent(r->baseline_f1).c_str());
    table << line;
    std::snprintf(line, sizeof(line), "%c,%.6f,%.6f,%.6f,%.6f\n", code_of(r->category),
                  r->model.accuracy, r->model.f1, r->model.recall, r->baseline_f1);
    csv << line;
  }
  out.table = table.str();
  out.csv = csv.str();
  return out;
}

}  // namespace triage::evaluation
