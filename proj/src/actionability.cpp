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

#include "triage/actionability.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_set>

#include "json.hpp"

#include "triage/binary_io.hpp"
#include "triage/evaluation.hpp"
#include "triage/omp_util.hpp"
#include "triage/parallel.hpp"

namespace triage::actionability {

namespace {

constexpr char kMagic[] = "TRIAGEACT";
constexpr std::uint32_t kFormatVersion = 1;

// Below this an alpha counts as zero when choosing support vectors.
constexpr double kSupportEps = 1e-8;

void check_training_inputs(std::span<const std::vector<double>> X, std::span<const int> y) {
  if (X.size() != y.size()) throw InvalidArgument("train_svm: X and y differ in length");
  if (X.empty()) throw InvalidArgument("train_svm: empty training set");
  const std::size_t d = X[0].size();
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].size() != d) throw InvalidArgument("train_svm: inconsistent feature dimensions");
    if (y[i] == 1)
      pos = true;
    else if (y[i] == -1)
      neg = true;
    else
      throw InvalidArgument("train_svm: labels must be +1 or -1");
  }
  if (!pos || !neg) throw InvalidArgument("train_svm: both classes must be present");
}

class SmoSolver {
 public:
  SmoSolver(std::span<const std::vector<double>> X, std::span<const int> y,
            const SvmHyperparams& hp, std::uint64_t seed, bool record)
      : X_(X), y_(y), hp_(hp), n_(X.size()), rng_(seed), record_(record) {
    K_ = parallel::rbf_kernel_matrix(X, hp.gamma, 1);
    alpha_.assign(n_, 0.0);
    g_.assign(n_, 0.0);
  }

  SvmTrainResult run() {
    SvmTrainResult result;
    bool converged = false;
    for (std::size_t sweep = 0; sweep < hp_.max_passes; ++sweep) {
      ++result.sweeps;
      std::size_t violators = 0, changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!violates_kkt(i)) continue;
        ++violators;
        if (improve(i, result)) ++changed;
      }
      if (violators == 0) {
        converged = true;
        break;
      }
      if (changed == 0) break;  // no pair can make progress
    }

    SvmModel& m = result.model;
    m.hyperparams = hp_;
    m.dimension = X_[0].size();
    m.converged = converged;
    m.bias = final_bias();
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] <= kSupportEps) continue;
      m.support_vectors.insert(m.support_vectors.end(), X_[i].begin(), X_[i].end());
      m.coefficients.push_back(alpha_[i] * y_[i]);
    }
    result.alphas = alpha_;
    return result;
  }

 private:
  double K(std::size_t i, std::size_t j) const { return K_[i * n_ + j]; }
  double error(std::size_t i) const { return g_[i] + b_ - y_[i]; }

  bool violates_kkt(std::size_t i) const {
    const double r = y_[i] * error(i);
    return (r < -hp_.tolerance && alpha_[i] < hp_.C) || (r > hp_.tolerance && alpha_[i] > 0);
  }

  bool improve(std::size_t i, SvmTrainResult& result) {
    if (n_ < 2) return false;
    std::uniform_int_distribution<std::size_t> pick(0, n_ - 2);
    std::size_t j = pick(rng_);
    if (j >= i) ++j;
    if (take_step(i, j, result)) return true;
    const std::size_t start = pick(rng_);
    for (std::size_t m = 0; m < n_; ++m) {
      const std::size_t k = (start + m) % n_;
      if (k != i && k != j && take_step(i, k, result)) return true;
    }
    return false;
  }

  bool take_step(std::size_t i, std::size_t j, SvmTrainResult& result) {
    const double C = hp_.C;
    const double ai = alpha_[i], aj = alpha_[j];
    const int yi = y_[i], yj = y_[j];
    const double Ei = error(i), Ej = error(j);

    double L, H;
    if (yi != yj) {
      L = std::max(0.0, aj - ai);
      H = std::min(C, C + aj - ai);
    } else {
      L = std::max(0.0, ai + aj - C);
      H = std::min(C, ai + aj);
    }
    if (H - L < 1e-12) return false;
    const double eta = K(i, i) + K(j, j) - 2 * K(i, j);
    if (eta <= 1e-12) return false;

    double aj_new = std::clamp(aj + yj * (Ei - Ej) / eta, L, H);
    if (std::abs(aj_new - aj) < 1e-12 * (aj + aj_new + 1e-12)) return false;
    double ai_new = ai + yi * yj * (aj - aj_new);
    ai_new = std::clamp(ai_new, 0.0, C);

    const double dai = ai_new - ai, daj = aj_new - aj;
    const double b1 = b_ - Ei - yi * dai * K(i, i) - yj * daj * K(i, j);
    const double b2 = b_ - Ej - yi * dai * K(i, j) - yj * daj * K(j, j);
    if (ai_new > 0 && ai_new < C)
      b_ = b1;
    else if (aj_new > 0 && aj_new < C)
      b_ = b2;
    else
      b_ = 0.5 * (b1 + b2);

    alpha_[i] = ai_new;
    alpha_[j] = aj_new;
    for (std::size_t k = 0; k < n_; ++k) g_[k] += yi * dai * K(i, k) + yj * daj * K(j, k);
    ++result.steps;
    if (record_) result.objective_trace.push_back(objective());
    return true;
  }

  double objective() const {
    double lin = 0, quad = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      lin += alpha_[i];
      quad += alpha_[i] * y_[i] * g_[i];
    }
    return lin - 0.5 * quad;
  }

  // Average of y_i - g_i over free vectors; without free vectors, the
  // midpoint of the interval allowed by the bounded ones.
  double final_bias() const {
    double sum = 0;
    std::size_t free = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = y_[i] - g_[i];
      if (alpha_[i] > kSupportEps && alpha_[i] < hp_.C - kSupportEps) {
        sum += r;
        ++free;
        continue;
      }
      // alpha = 0 needs y f >= 1; alpha = C needs y f <= 1.
      const bool at_upper = alpha_[i] >= hp_.C - kSupportEps;
      if ((y_[i] == 1) != at_upper)
        lo = std::max(lo, r);
      else
        hi = std::min(hi, r);
    }
    if (free > 0) return sum / static_cast<double>(free);
    if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
    if (std::isfinite(lo)) return lo;
    if (std::isfinite(hi)) return hi;
    return b_;
  }

  std::span<const std::vector<double>> X_;
  std::span<const int> y_;
  SvmHyperparams hp_;
  std::size_t n_;
  Rng rng_;
  bool record_;
  std::vector<double> K_;
  std::vector<double> alpha_;
  std::vector<double> g_;  // g_i = sum_k alpha_k y_k K_ik
  double b_ = 0;
};

nlohmann::json hyperparams_to_json(const SvmHyperparams& hp) {
  return {{"C", hp.C}, {"gamma", hp.gamma}, {"tolerance", hp.tolerance},
          {"max_passes", hp.max_passes}};
}

SvmHyperparams hyperparams_from_json(const nlohmann::json& j) {
  SvmHyperparams hp;
  hp.C = j.at("C").get<double>();
  hp.gamma = j.at("gamma").get<double>();
  hp.tolerance = j.at("tolerance").get<double>();
  hp.max_passes = j.at("max_passes").get<std::size_t>();
  return hp;
}

// Downsamples and trains one category. Rows with positive[i] are positives.
SvmModel fit_category(ActionabilityType t, const std::vector<std::vector<double>>& X,
                      const std::vector<bool>& positive, const EnsembleTrainOptions& options,
                      CategoryTrainReport& report) {
  std::vector<std::vector<double>> pos, neg;
  for (std::size_t i = 0; i < X.size(); ++i) (positive[i] ? pos : neg).push_back(X[i]);
  const std::string tag(1, code_of(t));
  if (pos.empty()) throw DataError("no positive training example for category " + tag);
  if (neg.empty()) throw DataError("no negative training example for category " + tag);
  auto balanced = downsample_negatives<std::vector<double>>(
      pos, neg, derive_seed(options.seed, "downsample/" + tag));
  std::vector<std::vector<double>> Xb = balanced.positives;
  Xb.insert(Xb.end(), balanced.negatives.begin(), balanced.negatives.end());
  std::vector<int> yb(balanced.positives.size(), 1);
  yb.resize(Xb.size(), -1);
  SvmModel model = train_svm(Xb, yb, options.hyperparams, derive_seed(options.seed, "smo/" + tag));
  model.category = t;
  report.category = t;
  report.positives = balanced.positives.size();
  report.negatives = balanced.negatives.size();
  report.passthrough = balanced.passthrough;
  report.support_vectors = model.support_count();
  report.converged = model.converged;
  return model;
}

std::vector<text::TokenSequence> documents(std::span<const features::TokenizedExample> corpus) {
  std::vector<text::TokenSequence> docs;
  docs.reserve(corpus.size());
  for (const auto& ex : corpus) docs.push_back(ex.tokens);
  return docs;
}

}  // namespace

void SvmHyperparams::validate() const {
  if (!(C > 0) || !(gamma > 0) || !(tolerance > 0) || max_passes == 0)
    throw InvalidArgument("SVM hyperparameters C, gamma, tolerance and max_passes must be positive");
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
  if (x.size() != y.size()) throw InvalidArgument("rbf_kernel: dimension mismatch");
  double sq = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sq += d * d;
  }
  return std::exp(-gamma * sq);
}

double SvmModel::decision_value(std::span<const double> x) const {
  if (x.size() != dimension)
    throw InvalidArgument("SVM expects " + std::to_string(dimension) + " features, got " +
                          std::to_string(x.size()));
  double f = bias;
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    f += coefficients[i] * rbf_kernel(support_vector(i), x, hyperparams.gamma);
  return f;
}

double dual_objective(std::span<const double> alphas, std::span<const std::vector<double>> X,
                      std::span<const int> y, double gamma) {
  double lin = 0, quad = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    lin += alphas[i];
    for (std::size_t j = 0; j < alphas.size(); ++j)
      quad += alphas[i] * alphas[j] * y[i] * y[j] * rbf_kernel(X[i], X[j], gamma);
  }
  return lin - 0.5 * quad;
}

SvmTrainResult train_svm_detailed(std::span<const std::vector<double>> X, std::span<const int> y,
                                  const SvmHyperparams& hp, std::uint64_t seed,
                                  bool record_objective) {
  hp.validate();
  check_training_inputs(X, y);
  SmoSolver solver(X, y, hp, seed, record_objective);
  return solver.run();
}

SvmModel train_svm(std::span<const std::vector<double>> X, std::span<const int> y,
                   const SvmHyperparams& hp, std::uint64_t seed) {
  return train_svm_detailed(X, y, hp, seed).model;
}

Prediction classify_one(const SvmModel& model, std::span<const double> features) {
  Prediction p;
  p.margin = model.decision_value(features);
  p.label = p.margin >= 0 ? 1 : -1;
  return p;
}

std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("grid_search: need at least two folds");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
  if (pos.size() < folds)
    throw DataError("grid_search: only " + std::to_string(pos.size()) + " positive examples for " +
                    std::to_string(folds) + " folds; some fold would lose all positives, use fewer folds");
  if (neg.size() < folds)
    throw DataError("grid_search: only " + std::to_string(neg.size()) + " negative examples for " +
                    std::to_string(folds) + " folds; use fewer folds");
  Rng rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::vector<std::size_t> fold(y.size());
  for (std::size_t r = 0; r < pos.size(); ++r) fold[pos[r]] = r % folds;
  for (std::size_t r = 0; r < neg.size(); ++r) fold[neg[r]] = r % folds;
  return fold;
}

GridResult grid_search(std::span<const std::vector<double>> X, std::span<const int> y,
                       std::span<const double> C_grid, std::span<const double> gamma_grid,
                       std::size_t folds, std::uint64_t seed, const SvmHyperparams& base,
                       int threads) {
  if (C_grid.empty() || gamma_grid.empty()) throw InvalidArgument("grid_search: empty grid");
  if (X.size() != y.size()) throw InvalidArgument("grid_search: X and y differ in length");
  const auto fold_of = stratified_folds(y, folds, derive_seed(seed, "folds"));

  const std::size_t cells = C_grid.size() * gamma_grid.size();
  std::vector<double> f1(cells * folds, 0.0);
  const auto jobs = static_cast<std::ptrdiff_t>(cells * folds);
  ExceptionSlot error;
#pragma omp parallel for schedule(dynamic) num_threads(omp_threads(threads))
  for (std::ptrdiff_t job = 0; job < jobs; ++job) {
    error.capture([&] {
      const std::size_t cell = static_cast<std::size_t>(job) / folds;
      const std::size_t k = static_cast<std::size_t>(job) % folds;
      SvmHyperparams hp = base;
      hp.C = C_grid[cell / gamma_grid.size()];
      hp.gamma = gamma_grid[cell % gamma_grid.size()];
      std::vector<std::vector<double>> Xtr;
      std::vector<int> ytr;
      for (std::size_t i = 0; i < X.size(); ++i)
        if (fold_of[i] != k) {
          Xtr.push_back(X[i]);
          ytr.push_back(y[i]);
        }
      const auto model = train_svm(Xtr, ytr, hp, derive_seed(seed, "grid-smo"));
      std::vector<int> pred, gold;
      for (std::size_t i = 0; i < X.size(); ++i)
        if (fold_of[i] == k) {
          pred.push_back(classify_one(model, X[i]).label);
          gold.push_back(y[i]);
        }
      f1[static_cast<std::size_t>(job)] = evaluation::metrics(evaluation::confusion(pred, gold)).f1;
    });
  }
  error.rethrow();

  GridResult result;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double sum = 0;
    for (std::size_t k = 0; k < folds; ++k) sum += f1[cell * folds + k];
    result.cells.push_back({C_grid[cell / gamma_grid.size()], gamma_grid[cell % gamma_grid.size()],
                            sum / static_cast<double>(folds)});
  }
  result.best = result.cells.front();
  for (const auto& c : result.cells) {
    const auto& b = result.best;
    if (c.mean_f1 > b.mean_f1 ||
        (c.mean_f1 == b.mean_f1 && (c.gamma < b.gamma || (c.gamma == b.gamma && c.C < b.C))))
      result.best = c;
  }
  return result;
}

int keyword_baseline(const text::TokenSequence& tokens, const features::KeywordList& keywords) {
  std::unordered_set<std::string> kw;
  for (const auto& k : keywords.keywords) kw.insert(text::ascii_lower(k));
  for (const auto& t : tokens)
    if (kw.contains(text::ascii_lower(t))) return 1;
  return -1;
}

Ensemble train_ensemble(std::span<const features::TokenizedExample> corpus,
                        std::span<const features::KeywordList> keyword_lists,
                        const text::EmbeddingTable& table, const EnsembleTrainOptions& options,
                        std::vector<CategoryTrainReport>* report) {
  options.hyperparams.validate();
  options.features.validate();
  Ensemble ensemble;
  ensemble.features = options.features;
  for (auto t : kAllActionabilityTypes) {
    const auto* list = features::find_list(keyword_lists, t);
    if (!list)
      throw DataError(std::string("no keyword list for category ") + code_of(t) + " " +
                      std::string(name_of(t)));
    ensemble.keywords[index_of(t)] = *list;
  }
  for (auto t : kAllActionabilityTypes) {
    const bool any = std::any_of(corpus.begin(), corpus.end(),
                                 [&](const auto& ex) { return ex.actions.contains(t); });
    if (!any)
      throw DataError(std::string("no positive training example for category ") + code_of(t) +
                      " " + std::string(name_of(t)));
  }

  const auto docs = documents(corpus);

  std::array<CategoryTrainReport, kActionabilityTypeCount> reports;
  ExceptionSlot error;
  const auto categories = static_cast<std::ptrdiff_t>(kActionabilityTypeCount);
#pragma omp parallel for schedule(dynamic) num_threads(omp_threads(options.threads))
  for (std::ptrdiff_t c = 0; c < categories; ++c) {
    error.capture([&] {
      const auto t = kAllActionabilityTypes[static_cast<std::size_t>(c)];
      const features::Vectorizer vec(ensemble.keywords[index_of(t)], table, options.features);
      const auto fvs = parallel::vectorize_batch_reference(vec, docs);
      std::vector<std::vector<double>> X;
      std::vector<bool> positive;
      for (std::size_t i = 0; i < fvs.size(); ++i) {
        X.push_back(fvs[i].values);
        positive.push_back(corpus[i].actions.contains(t));
      }
      auto& r = reports[static_cast<std::size_t>(c)];
      ensemble.models[index_of(t)] = fit_category(t, X, positive, options, r);
      r.missing_keywords = vec.diagnostics().missing_keywords;
    });
  }
  error.rethrow();
  if (report) report->assign(reports.begin(), reports.end());
  return ensemble;
}

std::vector<evaluation::CategoryRow> evaluate_ensemble(
    const Ensemble& ensemble, const text::EmbeddingTable& table,
    std::span<const features::TokenizedExample> test) {
  if (test.empty()) throw InvalidArgument("evaluate_ensemble: empty test set");
  const Tagger tagger(ensemble, table);
  std::array<std::vector<int>, kActionabilityTypeCount> pred, base, gold;
  for (const auto& ex : test) {
    const auto predicted = tagger.tag(ex.tokens);
    for (auto t : kAllActionabilityTypes) {
      const auto i = index_of(t);
      pred[i].push_back(predicted.contains(t) ? 1 : -1);
      base[i].push_back(keyword_baseline(ex.tokens, ensemble.keywords[i]));
      gold[i].push_back(ex.actions.contains(t) ? 1 : -1);
    }
  }
  std::vector<evaluation::CategoryRow> rows;
  for (auto t : kAllActionabilityTypes) {
    const auto i = index_of(t);
    rows.push_back({t, evaluation::metrics(evaluation::confusion(pred[i], gold[i])),
                    evaluation::metrics(evaluation::confusion(base[i], gold[i])).f1});
  }
  return rows;
}

std::vector<evaluation::CategoryRow> cross_validate_ensemble(
    std::span<const features::TokenizedExample> corpus,
    std::span<const features::KeywordList> keyword_lists, const text::EmbeddingTable& table,
    const EnsembleTrainOptions& options, std::size_t folds) {
  options.hyperparams.validate();
  options.features.validate();
  const auto docs = documents(corpus);
  std::array<evaluation::CategoryRow, kActionabilityTypeCount> rows;
  ExceptionSlot error;
  const auto categories = static_cast<std::ptrdiff_t>(kActionabilityTypeCount);
#pragma omp parallel for schedule(dynamic) num_threads(omp_threads(options.threads))
  for (std::ptrdiff_t c = 0; c < categories; ++c) {
    error.capture([&] {
      const auto t = kAllActionabilityTypes[static_cast<std::size_t>(c)];
      const std::string tag(1, code_of(t));
      const auto* list = features::find_list(keyword_lists, t);
      if (!list) throw DataError("no keyword list for category " + tag);
      const features::Vectorizer vec(*list, table, options.features);
      const auto fvs = parallel::vectorize_batch_reference(vec, docs);
      std::vector<int> y;
      for (const auto& ex : corpus) y.push_back(ex.actions.contains(t) ? 1 : -1);
      const auto fold_of = stratified_folds(y, folds, derive_seed(options.seed, "cv/" + tag));
      evaluation::Confusion model_c, base_c;
      for (std::size_t k = 0; k < folds; ++k) {
        std::vector<std::vector<double>> X;
        std::vector<bool> positive;
        std::vector<int> pred, base, gold;
        for (std::size_t i = 0; i < corpus.size(); ++i)
          if (fold_of[i] != k) {
            X.push_back(fvs[i].values);
            positive.push_back(y[i] == 1);
          }
        CategoryTrainReport unused;
        EnsembleTrainOptions fold_options = options;
        fold_options.seed = derive_seed(options.seed, "fold/" + std::to_string(k));
        const auto model = fit_category(t, X, positive, fold_options, unused);
        for (std::size_t i = 0; i < corpus.size(); ++i)
          if (fold_of[i] == k) {
            pred.push_back(classify_one(model, fvs[i].values).label);
            base.push_back(keyword_baseline(corpus[i].tokens, *list));
            gold.push_back(y[i]);
          }
        model_c += evaluation::confusion(pred, gold);
        base_c += evaluation::confusion(base, gold);
      }
      rows[static_cast<std::size_t>(c)] = {t, evaluation::metrics(model_c),
                                           evaluation::metrics(base_c).f1};
    });
  }
  error.rethrow();
  return {rows.begin(), rows.end()};
}

Tagger::Tagger(const Ensemble& ensemble, const text::EmbeddingTable& table) : ensemble_(&ensemble) {
  for (auto t : kAllActionabilityTypes)
    vectorizers_.emplace_back(ensemble.keywords[index_of(t)], table, ensemble.features);
}

std::array<Prediction, kActionabilityTypeCount> Tagger::predict(
    const text::TokenSequence& tokens) const {
  std::array<Prediction, kActionabilityTypeCount> out;
  for (auto t : kAllActionabilityTypes) {
    const auto fv = vectorizers_[index_of(t)](tokens);
    out[index_of(t)] = classify_one(ensemble_->models[index_of(t)], fv.values);
  }
  return out;
}

ActionSet Tagger::tag(const text::TokenSequence& tokens) const {
  ActionSet set;
  const auto preds = predict(tokens);
  for (auto t : kAllActionabilityTypes)
    if (preds[index_of(t)].label == 1) set.insert(t);
  return set;
}

ActionSet Tagger::tag(std::string_view text) const { return tag(text::tokenize(text)); }

ActionSet classify_actionability(const Ensemble& ensemble, const text::EmbeddingTable& table,
                                 std::string_view text) {
  return Tagger(ensemble, table).tag(text);
}

void save_ensemble(const Ensemble& ensemble, std::ostream& out) {
  nlohmann::json header;
  header["features"] = {
      {"cutoff", ensemble.features.cutoff},
      {"denominator", ensemble.features.denominator == features::DenominatorPolicy::AllTokens
                          ? "all_tokens"
                          : "embedded_tokens_only"}};
  header["models"] = nlohmann::json::array();
  for (auto t : kAllActionabilityTypes) {
    const auto& m = ensemble.models[index_of(t)];
    header["models"].push_back({{"category", std::string(1, code_of(t))},
                                {"keywords", ensemble.keywords[index_of(t)].keywords},
                                {"hyperparams", hyperparams_to_json(m.hyperparams)},
                                {"dimension", m.dimension},
                                {"converged", m.converged}});
  }
  out.write(kMagic, sizeof(kMagic) - 1);
  binary::write_le<std::uint32_t>(out, kFormatVersion);
  binary::write_string(out, header.dump());
  for (auto t : kAllActionabilityTypes) {
    const auto& m = ensemble.models[index_of(t)];
    binary::write_tensor(out, {m.support_count(), m.dimension}, m.support_vectors);
    binary::write_tensor(out, {m.support_count()}, m.coefficients);
    binary::write_tensor(out, {1}, {m.bias});
  }
  if (!out) throw DataError("failed to write ensemble");
}

void save_ensemble(const Ensemble& ensemble, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_ensemble(ensemble, out);
}

Ensemble load_ensemble(std::istream& in) {
  char magic[sizeof(kMagic) - 1];
  if (!in.read(magic, sizeof(magic)) || std::string_view(magic, sizeof(magic)) != kMagic)
    throw DataError("not an actionability ensemble file");
  const auto version = binary::read_le<std::uint32_t>(in);
  if (version != kFormatVersion)
    throw DataError("unsupported ensemble version " + std::to_string(version));
  Ensemble e;
  try {
    const auto header = nlohmann::json::parse(binary::read_string(in));
    e.features.cutoff = header.at("features").at("cutoff").get<double>();
    e.features.denominator = header.at("features").at("denominator") == "all_tokens"
                                 ? features::DenominatorPolicy::AllTokens
                                 : features::DenominatorPolicy::EmbeddedTokensOnly;
    const auto& models = header.at("models");
    if (models.size() != kActionabilityTypeCount)
      throw DataError("ensemble file must hold nine models");
    for (std::size_t i = 0; i < kActionabilityTypeCount; ++i) {
      const auto& mj = models[i];
      const auto t = parse_actionability(mj.at("category").get<std::string>());
      if (!t || index_of(*t) != i) throw DataError("ensemble file: categories out of order");
      auto& m = e.models[i];
      m.category = *t;
      m.hyperparams = hyperparams_from_json(mj.at("hyperparams"));
      m.dimension = mj.at("dimension").get<std::size_t>();
      m.converged = mj.at("converged").get<bool>();
      e.keywords[i] = {*t, mj.at("keywords").get<std::vector<std::string>>()};
    }
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("ensemble file: bad header: ") + ex.what());
  }
  for (auto& m : e.models) {
    auto sv = binary::read_tensor(in);
    auto coef = binary::read_tensor(in);
    auto bias = binary::read_tensor(in);
    if (sv.shape.size() != 2 || sv.shape[1] != m.dimension || coef.shape.size() != 1 ||
        coef.shape[0] != sv.shape[0] || bias.data.size() != 1)
      throw DataError("ensemble file: inconsistent tensor shapes");
    m.support_vectors = std::move(sv.data);
    m.coefficients = std::move(coef.data);
    m.bias = bias.data[0];
  }
  return e;
}

Ensemble load_ensemble(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_ensemble(in);
}

}  // namespace triage::actionability
