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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triage/types.hpp"

namespace triage::evaluation {

// Counts over +1/-1 predictions against +1/-1 gold labels.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  Confusion& operator+=(const Confusion& o);
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

// Throws InvalidArgument on a length mismatch, an empty input or a label
// other than +1/-1.
Confusion confusion(std::span<const int> predictions, std::span<const int> golds);

// Precision, recall and F1 are 0 when their denominators are 0.
struct MetricsReport {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

MetricsReport metrics(const Confusion& c);  // throws InvalidArgument when empty

enum class Protocol { HeldOut, CrossValidation };

std::string_view to_string(Protocol p);

struct CategoryRow {
  ActionabilityType category = ActionabilityType::Needs;
  MetricsReport model;
  double baseline_f1 = 0;
};

struct RenderedReport {
  std::string table;  // aligned text, percentages with two decimals
  std::string csv;    // category,accuracy,f1,recall,baseline_f1
};

// "57.50%"
std::string percent(double fraction);

// One row per category in A..I order whatever the input order. Throws
// InvalidArgument when a category is missing or repeated.
RenderedReport report_table(std::span<const CategoryRow> rows, Protocol protocol);

}  // namespace triage::evaluation
