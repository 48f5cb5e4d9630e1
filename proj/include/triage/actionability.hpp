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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "triage/error.hpp"
#include "triage/evaluation.hpp"
#include "triage/features.hpp"
#include "triage/random.hpp"
#include "triage/text.hpp"
#include "triage/types.hpp"

// Per-category RBF support vector machines over keyword-similarity features.
namespace triage::actionability {

struct SvmHyperparams {
  double C = 20.0;
  double gamma = 3.0;
  double tolerance = 1e-3;
  std::size_t max_passes = 200;

  void validate() const;  // throws InvalidArgument unless all positive
};

// exp(-gamma * |x - y|^2)
double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

struct SvmModel {
  ActionabilityType category = ActionabilityType::Needs;
  SvmHyperparams hyperparams;
  std::size_t dimension = 0;
  std::vector<double> support_vectors;  // row-major [support_count][dimension]
  std::vector<double> coefficients;     // alpha_i * y_i
  double bias = 0;
  bool converged = true;

  std::size_t support_count() const { return coefficients.size(); }
  std::span<const double> support_vector(std::size_t i) const {
    return {support_vectors.data() + i * dimension, dimension};
  }
  // sum_i coef_i K(sv_i, x) + b. Throws InvalidArgument on a dimension mismatch.
  double decision_value(std::span<const double> x) const;
};

struct SvmTrainResult {
  SvmModel model;
  std::vector<double> alphas;  // one per training point
  std::size_t sweeps = 0;
  std::size_t steps = 0;
  // Dual objective after every accepted pair update, when requested.
  std::vector<double> objective_trace;
};

// W(alpha) = sum alpha - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
double dual_objective(std::span<const double> alphas, std::span<const std::vector<double>> X,
                      std::span<const int> y, double gamma);

// Sequential minimal optimization with a pairwise working set: each sweep
// visits every KKT violator and pairs it with a random partner, falling back
// to a scan over all partners when that step makes no progress. Stops when a
// sweep finds no violator (converged) or after max_passes sweeps (returns the
// last iterate with converged = false). Labels are +1/-1 and both must occur.
SvmTrainResult train_svm_detailed(std::span<const std::vector<double>> X, std::span<const int> y,
                                  const SvmHyperparams& hp, std::uint64_t seed,
                                  bool record_objective = false);

SvmModel train_svm(std::span<const std::vector<double>> X, std::span<const int> y,
                   const SvmHyperparams& hp, std::uint64_t seed);

struct Prediction {
  int label = 1;  // sign of the margin; a zero margin counts as +1
  double margin = 0;
};

Prediction classify_one(const SvmModel& model, std::span<const double> features);

template <typename T>
struct Balanced {
  std::vector<T> positives;
  std::vector<T> negatives;
  bool passthrough = false;  // there were fewer negatives than positives
};

// Uniformly samples |positives| negatives without replacement, keeping their
// input order. Throws InvalidArgument when there are no positives.
template <typename T>
Balanced<T> downsample_negatives(std::span<const T> positives, std::span<const T> negatives,
                                 std::uint64_t seed) {
  if (positives.empty()) throw InvalidArgument("downsample_negatives: no positive examples");
  Balanced<T> out;
  out.positives.assign(positives.begin(), positives.end());
  if (negatives.size() < positives.size()) {
    out.passthrough = true;
    out.negatives.assign(negatives.begin(), negatives.end());
    return out;
  }
  for (auto i : sample_indices(negatives.size(), positives.size(), seed))
    out.negatives.push_back(negatives[i]);
  return out;
}

struct GridCell {
  double C = 0;
  double gamma = 0;
  double mean_f1 = 0;
};

struct GridResult {
  std::vector<GridCell> cells;  // C-major: all gammas for C_grid[0] first
  GridCell best;
};

inline const std::vector<double> kDefaultCGrid = {0.5, 1, 5, 10, 20, 50};
inline const std::vector<double> kDefaultGammaGrid = {0.1, 0.5, 1, 3, 10};

// Stratified k-fold cross-validated F1 for every (C, gamma) pair. The best
// cell has the highest mean F1; ties go to the smaller gamma, then the
// smaller C. Throws DataError when a fold would hold no positive (or no
// negative) example.
GridResult grid_search(std::span<const std::vector<double>> X, std::span<const int> y,
                       std::span<const double> C_grid, std::span<const double> gamma_grid,
                       std::size_t folds, std::uint64_t seed, const SvmHyperparams& base = {},
                       int threads = 0);

// Fold index of every example for stratified k-fold splitting.
std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t folds,
                                          std::uint64_t seed);

// +1 when any token equals (case-insensitively) one of the keywords.
int keyword_baseline(const text::TokenSequence& tokens, const features::KeywordList& keywords);

// One model and keyword list per category, plus the shared feature settings.
struct Ensemble {
  std::array<SvmModel, kActionabilityTypeCount> models;
  std::array<features::KeywordList, kActionabilityTypeCount> keywords;
  features::FeatureConfig features;
};

struct CategoryTrainReport {
  ActionabilityType category = ActionabilityType::Needs;
  std::size_t positives = 0;
  std::size_t negatives = 0;  // after downsampling
  bool passthrough = false;
  std::size_t support_vectors = 0;
  bool converged = true;
  std::vector<std::string> missing_keywords;
};

struct EnsembleTrainOptions {
  SvmHyperparams hyperparams;
  features::FeatureConfig features;
  std::uint64_t seed = 1;
  int threads = 0;
};

// Trains every category on its own keyword features, downsampling negatives
// per category. `keyword_lists` must cover all nine categories. Throws
// DataError when a category has no positive example.
Ensemble train_ensemble(std::span<const features::TokenizedExample> corpus,
                        std::span<const features::KeywordList> keyword_lists,
                        const text::EmbeddingTable& table, const EnsembleTrainOptions& options,
                        std::vector<CategoryTrainReport>* report = nullptr);

// Applies an ensemble to tokenized text.
class Tagger {
 public:
  Tagger(const Ensemble& ensemble, const text::EmbeddingTable& table);

  std::array<Prediction, kActionabilityTypeCount> predict(const text::TokenSequence& tokens) const;
  ActionSet tag(const text::TokenSequence& tokens) const;
  ActionSet tag(std::string_view text) const;

 private:
  const Ensemble* ensemble_;
  std::vector<features::Vectorizer> vectorizers_;
};

// tokenize -> vectorize per category -> classify_one per category.
ActionSet classify_actionability(const Ensemble& ensemble, const text::EmbeddingTable& table,
                                 std::string_view text);

// Model metrics and keyword-baseline F1 per category on a labeled test set
// taken as is (no downsampling).
std::vector<evaluation::CategoryRow> evaluate_ensemble(
    const Ensemble& ensemble, const text::EmbeddingTable& table,
    std::span<const features::TokenizedExample> test);

// Stratified k-fold evaluation per category: each fold's model is trained on
// the downsampled remaining folds and scored on the untouched held-out fold.
// Confusions are pooled over folds. Keyword lists stay fixed across folds.
std::vector<evaluation::CategoryRow> cross_validate_ensemble(
    std::span<const features::TokenizedExample> corpus,
    std::span<const features::KeywordList> keyword_lists, const text::EmbeddingTable& table,
    const EnsembleTrainOptions& options, std::size_t folds);

// Binary ensemble file: magic, version, JSON header (feature config, keyword
// lists, per-model hyperparameters), then per model the support vectors,
// coefficients and bias as float64 tensors.
void save_ensemble(const Ensemble& ensemble, std::ostream& out);
void save_ensemble(const Ensemble& ensemble, const std::filesystem::path& path);
Ensemble load_ensemble(std::istream& in);
Ensemble load_ensemble(const std::filesystem::path& path);

}  // namespace triage::actionability
