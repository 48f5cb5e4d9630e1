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

#include "triage/pipeline.hpp"

#include <cstdio>

#include "json.hpp"
#include "triage/error.hpp"
#include "triage/omp_util.hpp"

namespace triage::pipeline {

Pipeline::Pipeline(Gate gate, TagFn tagger, double threshold)
    : gate_(std::move(gate)), tagger_(std::move(tagger)), threshold_(threshold) {
  if (!(threshold > 0 && threshold < 1))
    throw InvalidArgument("informativeness threshold must lie in (0, 1)");
}

Pipeline::Pipeline(const informativeness::CnnModel& model, const actionability::Tagger& tagger,
                   double threshold)
    : Pipeline(
          [&model](std::string_view text) {
            return informativeness::classify(model, text).probability_informative;
          },
          [&tagger](std::string_view text) { return tagger.tag(text); }, threshold) {}

TriageResult Pipeline::run(const Message& message) const {
  TriageResult r;
  r.id = message.id;
  ++gate_calls_;
  const auto decision = informativeness::decide(gate_(message.text), threshold_);
  r.probability = decision.probability_informative;
  r.informative = decision.decision == BinaryInformativeness::Informative;
  if (!r.informative) return r;
  ++tagger_calls_;
  r.actions = tagger_(message.text);
  return r;
}

std::vector<TriageResult> Pipeline::run_batch(std::span<const Message> messages,
                                              int threads) const {
  std::vector<TriageResult> out(messages.size());
  const auto n = static_cast<std::ptrdiff_t>(messages.size());
  ExceptionSlot error;
#pragma omp parallel for schedule(dynamic, 16) num_threads(omp_threads(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) error.capture([&] { out[i] = run(messages[i]); });
  error.rethrow();
  return out;
}

std::string to_json_line(const TriageResult& result) {
  char p[32];
  std::snprintf(p, sizeof(p), "%.6f", result.probability);
  nlohmann::ordered_json actions = nlohmann::ordered_json::array();
  for (const auto& c : result.actions.codes()) actions.push_back(c);
  // p is spliced in as fixed-precision text so output does not depend on
  // shortest-roundtrip float printing.
  return "{\"id\":" + nlohmann::json(result.id).dump() +
         ",\"informative\":" + (result.informative ? "true" : "false") + ",\"p\":" + p +
         ",\"actions\":" + actions.dump() + "}";
}

}  // namespace triage::pipeline
