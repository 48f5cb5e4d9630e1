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

// Times the OpenMP kernels against their serial reference implementations
// and checks that both produce identical results.
//
//   triage_bench [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "support/synthetic.hpp"
#include "triage/parallel.hpp"

using namespace triage;

namespace {

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

void report(const char* name, double serial, double par, bool same) {
  std::printf("%-18s serial %8.4f s  parallel %8.4f s  speedup %5.2fx  %s\n", name, serial, par,
              serial / par, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : parallel::resolve_threads(0);
  std::printf("threads: %d\n", threads);
  bool ok = true;

  {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 0.3);
    std::vector<std::vector<double>> X(1500, std::vector<double>(18));
    for (auto& x : X)
      for (auto& v : x) v = u(rng);
    std::vector<double> a, b;
    const double s = best_of(3, [&] { a = parallel::rbf_kernel_matrix_reference(X, 3.0); });
    const double p = best_of(3, [&] { b = parallel::rbf_kernel_matrix(X, 3.0, threads); });
    report("rbf_kernel_matrix", s, p, a == b);
    ok = ok && a == b;
  }
  {
    const auto table = testing::world_embeddings();
    const features::KeywordList list{ActionabilityType::Needs, testing::category_words()[0]};
    const features::Vectorizer vec(list, table);
    std::vector<text::TokenSequence> docs;
    for (const auto& m : testing::world_messages(40000, 2)) docs.push_back(text::tokenize(m.message.text));
    std::vector<features::FeatureVector> a, b;
    const double s = best_of(3, [&] { a = parallel::vectorize_batch_reference(vec, docs); });
    const double p = best_of(3, [&] { b = parallel::vectorize_batch(vec, docs, threads); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].values == b[i].values;
    report("vectorize_batch", s, p, same);
    ok = ok && same;
  }
  {
    informativeness::CnnConfig cfg;  // the default architecture
    const auto model = informativeness::init_model(cfg);
    const text::Alphabet alphabet(cfg.alphabet);
    std::vector<text::CharSequence> inputs;
    for (const auto& m : testing::world_messages(400, 3))
      inputs.push_back(text::quantize_chars(m.message.text, alphabet, cfg.max_len));
    std::vector<std::array<double, 2>> a, b;
    const double s = best_of(2, [&] { a = parallel::forward_batch_reference(model, inputs); });
    const double p = best_of(2, [&] { b = parallel::forward_batch(model, inputs, threads); });
    report("forward_batch", s, p, a == b);
    ok = ok && a == b;
  }
  return ok ? 0 : 1;
}
