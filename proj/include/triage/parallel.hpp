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

#include <array>
#include <span>
#include <vector>

#include "triage/features.hpp"
#include "triage/informativeness.hpp"
#include "triage/text.hpp"

// Data-parallel batch kernels. Each has a plain serial `_reference` twin that
// the tests compare against element for element; both produce bit-identical
// results for any thread count.
namespace triage::parallel {

// Row-major n x n Gram matrix of exp(-gamma |x_i - x_j|^2).
std::vector<double> rbf_kernel_matrix(std::span<const std::vector<double>> X, double gamma,
                                      int threads = 0);
std::vector<double> rbf_kernel_matrix_reference(std::span<const std::vector<double>> X,
                                                double gamma);

std::vector<features::FeatureVector> vectorize_batch(const features::Vectorizer& vectorizer,
                                                     std::span<const text::TokenSequence> docs,
                                                     int threads = 0);
std::vector<features::FeatureVector> vectorize_batch_reference(
    const features::Vectorizer& vectorizer, std::span<const text::TokenSequence> docs);

std::vector<std::array<double, 2>> forward_batch(const informativeness::CnnModel& model,
                                                 std::span<const text::CharSequence> inputs,
                                                 int threads = 0);
std::vector<std::array<double, 2>> forward_batch_reference(
    const informativeness::CnnModel& model, std::span<const text::CharSequence> inputs);

// OpenMP thread count for a request of `threads` (0 = runtime default).
int resolve_threads(int threads);

}  // namespace triage::parallel
