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

#include <atomic>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triage/actionability.hpp"
#include "triage/informativeness.hpp"
#include "triage/types.hpp"

// Two-stage triage: the informativeness gate runs first and only messages it
// accepts reach the actionability tagger.
namespace triage::pipeline {

struct TriageResult {
  std::string id;
  bool informative = false;
  double probability = 0;  // P(informative) from the gate
  ActionSet actions;       // empty when the gate rejected the message
};

// Returns P(informative) for a message text.
using Gate = std::function<double(std::string_view)>;
// Tags a message the gate accepted.
using TagFn = std::function<ActionSet(std::string_view)>;

class Pipeline {
 public:
  Pipeline(Gate gate, TagFn tagger, double threshold);
  Pipeline(const informativeness::CnnModel& model, const actionability::Tagger& tagger,
           double threshold);

  TriageResult run(const Message& message) const;
  // Results in input order whatever the thread count.
  std::vector<TriageResult> run_batch(std::span<const Message> messages, int threads = 0) const;

  double threshold() const { return threshold_; }
  std::size_t gate_calls() const { return gate_calls_.load(); }
  std::size_t tagger_calls() const { return tagger_calls_.load(); }

 private:
  Gate gate_;
  TagFn tagger_;
  double threshold_;
  mutable std::atomic<std::size_t> gate_calls_{0};
  mutable std::atomic<std::size_t> tagger_calls_{0};
};

// {"id":...,"informative":...,"p":...,"actions":[...]} without a newline.
std::string to_json_line(const TriageResult& result);

}  // namespace triage::pipeline
