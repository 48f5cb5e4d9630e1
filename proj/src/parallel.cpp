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

#include "triage/parallel.hpp"

#include <cmath>

#include "triage/actionability.hpp"
#include "triage/omp_util.hpp"

namespace triage::parallel {

int resolve_threads(int threads) { return omp_threads(threads); }

std::vector<double> rbf_kernel_matrix(std::span<const std::vector<double>> X, double gamma,
                                      int threads) {
  const std::size_t n = X.size();
  std::vector<double> K(n * n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    K[i * n + i] = 1.0;
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
      const double k = actionability::rbf_kernel(X[i], X[j], gamma);
      K[i * n + j] = k;
      K[j * n + i] = k;
    }
  }
  return K;
}

std::vector<double> rbf_kernel_matrix_reference(std::span<const std::vector<double>> X,
                                                double gamma) {
  const std::size_t n = X.size();
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) K[i * n + j] = actionability::rbf_kernel(X[i], X[j], gamma);
  return K;
}

std::vector<features::FeatureVector> vectorize_batch(const features::Vectorizer& vectorizer,
                                                     std::span<const text::TokenSequence> docs,
                                                     int threads) {
  std::vector<features::FeatureVector> out(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
  ExceptionSlot error;
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) error.capture([&] { out[i] = vectorizer(docs[i]); });
  error.rethrow();
  return out;
}

std::vector<features::FeatureVector> vectorize_batch_reference(
    const features::Vectorizer& vectorizer, std::span<const text::TokenSequence> docs) {
  std::vector<features::FeatureVector> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(vectorizer(d));
  return out;
}

std::vector<std::array<double, 2>> forward_batch(const informativeness::CnnModel& model,
                                                 std::span<const text::CharSequence> inputs,
                                                 int threads) {
  std::vector<std::array<double, 2>> out(inputs.size());
  const auto n = static_cast<std::ptrdiff_t>(inputs.size());
  ExceptionSlot error;
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i)
    error.capture([&] { out[i] = informativeness::forward(model, inputs[i]); });
  error.rethrow();
  return out;
}

std::vector<std::array<double, 2>> forward_batch_reference(
    const informativeness::CnnModel& model, std::span<const text::CharSequence> inputs) {
  std::vector<std::array<double, 2>> out;
  out.reserve(inputs.size());
  for (const auto& x : inputs) out.push_back(informativeness::forward(model, x));
  return out;
}

}  // namespace triage::parallel
