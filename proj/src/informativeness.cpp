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

#include "triage/informativeness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

#include "triage/binary_io.hpp"
#include "triage/error.hpp"
#include "triage/omp_util.hpp"
#include "triage/random.hpp"

namespace triage::informativeness {

namespace {

constexpr char kMagic[] = "TRIAGECNN";
constexpr std::uint32_t kFormatVersion = 1;

std::vector<std::size_t> compute_pooled_lengths(const CnnConfig& c) {
  std::vector<std::size_t> out;
  std::size_t len = c.max_len;
  for (std::size_t l = 0; l < c.conv.size(); ++l) {
    const auto& layer_spec = c.conv[l];
    if (len < layer_spec.kernel_width)
      throw InvalidArgument("conv layer " + std::to_string(l + 1) + ": input length " +
                            std::to_string(len) + " shorter than kernel width");
    len = (len - layer_spec.kernel_width + 1) / layer_spec.pool_width;
    if (len == 0)
      throw InvalidArgument("conv layer " + std::to_string(l + 1) + ": pooled length is zero");
    out.push_back(len);
  }
  return out;
}

std::size_t flat_size(const CnnConfig& c, const std::vector<std::size_t>& pooled) {
  return c.conv.back().filters * pooled.back();
}

struct ConvCache {
  std::size_t length = 0;         // conv output length
  std::size_t pooled_length = 0;
  std::vector<double> z;          // [filters][length] pre-activation
  std::vector<double> pooled;     // [filters][pooled_length] = relu(max z)
  std::vector<std::size_t> arg;   // position of the window maximum
};

struct DenseCache {
  std::vector<double> z;
  std::vector<double> a;
};

struct Cache {
  std::vector<ConvCache> conv;
  std::vector<DenseCache> dense;
  std::array<double, 2> logits{};
  std::array<double, 2> probs{};
};

void forward_cached(const CnnModel& model, const text::CharSequence& x, Cache& cache) {
  const auto& cfg = model.config();
  const auto& P = model.params();
  if (x.size() != cfg.max_len)
    throw InvalidArgument("forward: sequence length " + std::to_string(x.size()) +
                          " != max_len " + std::to_string(cfg.max_len));
  const std::size_t alpha = cfg.alphabet.size();

  cache.conv.resize(cfg.conv.size());
  std::size_t in_len = cfg.max_len;
  for (std::size_t l = 0; l < cfg.conv.size(); ++l) {
    const auto& layer_spec = cfg.conv[l];
    const auto& W = P[2 * l].data;
    const auto& B = P[2 * l + 1].data;
    auto& cc = cache.conv[l];
    const std::size_t F = layer_spec.filters, K = layer_spec.kernel_width;
    cc.length = in_len - K + 1;
    cc.pooled_length = model.pooled_lengths()[l];
    cc.z.assign(F * cc.length, 0.0);

    if (l == 0) {
      // One-hot input: each position selects one weight column per offset.
      for (std::size_t f = 0; f < F; ++f) {
        double* zf = cc.z.data() + f * cc.length;
        for (std::size_t t = 0; t < cc.length; ++t) {
          double s = B[f];
          for (std::size_t j = 0; j < K; ++j) {
            const auto idx = x[t + j];
            if (idx == 0 || idx > alpha) continue;
            s += W[(f * K + j) * alpha + (idx - 1)];
          }
          zf[t] = s;
        }
      }
    } else {
      const auto& prev = cache.conv[l - 1];
      const std::size_t C = cfg.conv[l - 1].filters;
      for (std::size_t f = 0; f < F; ++f) {
        double* zf = cc.z.data() + f * cc.length;
        for (std::size_t t = 0; t < cc.length; ++t) zf[t] = B[f];
        for (std::size_t j = 0; j < K; ++j) {
          for (std::size_t c = 0; c < C; ++c) {
            const double w = W[(f * K + j) * C + c];
            const double* in = prev.pooled.data() + c * prev.pooled_length + j;
            for (std::size_t t = 0; t < cc.length; ++t) zf[t] += w * in[t];
          }
        }
      }
    }

    const std::size_t pw = layer_spec.pool_width;
    cc.pooled.assign(F * cc.pooled_length, 0.0);
    cc.arg.assign(F * cc.pooled_length, 0);
    for (std::size_t f = 0; f < F; ++f) {
      const double* zf = cc.z.data() + f * cc.length;
      for (std::size_t u = 0; u < cc.pooled_length; ++u) {
        std::size_t best = u * pw;
        for (std::size_t v = 1; v < pw; ++v)
          if (zf[u * pw + v] > zf[best]) best = u * pw + v;
        cc.arg[f * cc.pooled_length + u] = best;
        cc.pooled[f * cc.pooled_length + u] = std::max(0.0, zf[best]);
      }
    }
    in_len = cc.pooled_length;
  }

  const std::size_t first_dense = 2 * cfg.conv.size();
  const std::size_t n_dense = cfg.hidden.size() + 1;
  cache.dense.resize(n_dense);
  const std::vector<double>* input = &cache.conv.back().pooled;
  for (std::size_t d = 0; d < n_dense; ++d) {
    const auto& W = P[first_dense + 2 * d];
    const auto& B = P[first_dense + 2 * d + 1].data;
    const std::size_t out = W.shape[0], in = W.shape[1];
    auto& dc = cache.dense[d];
    dc.z.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double* row = W.data.data() + o * in;
      double s = B[o];
      for (std::size_t i = 0; i < in; ++i) s += row[i] * (*input)[i];
      dc.z[o] = s;
    }
    const bool last = d + 1 == n_dense;
    dc.a = dc.z;
    if (!last)
      for (auto& v : dc.a) v = std::max(0.0, v);
    input = &dc.a;
  }
  const auto& logits = cache.dense.back().z;
  cache.logits = {logits[0], logits[1]};
  const double m = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - m), e1 = std::exp(logits[1] - m);
  cache.probs = {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double cross_entropy(const std::array<double, 2>& logits, std::size_t y) {
  const double m = std::max(logits[0], logits[1]);
  const double lse = m + std::log(std::exp(logits[0] - m) + std::exp(logits[1] - m));
  return lse - logits[y];
}

void backward(const CnnModel& model, const text::CharSequence& x, const Cache& cache,
              std::size_t y, double coeff, Gradients& G) {
  const auto& cfg = model.config();
  const auto& P = model.params();
  const std::size_t first_dense = 2 * cfg.conv.size();
  const std::size_t n_dense = cfg.hidden.size() + 1;

  std::vector<double> delta = {coeff * cache.probs[0], coeff * cache.probs[1]};
  delta[y] -= coeff;

  for (std::size_t d = n_dense; d-- > 0;) {
    const auto& W = P[first_dense + 2 * d];
    const std::size_t out = W.shape[0], in = W.shape[1];
    const std::vector<double>& input = d == 0 ? cache.conv.back().pooled : cache.dense[d - 1].a;
    auto& gW = G[first_dense + 2 * d];
    auto& gB = G[first_dense + 2 * d + 1];
    std::vector<double> dinput(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double g = delta[o];
      gB[o] += g;
      if (g == 0.0) continue;
      const double* row = W.data.data() + o * in;
      double* grow = gW.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        grow[i] += g * input[i];
        dinput[i] += g * row[i];
      }
    }
    if (d > 0) {
      const auto& z = cache.dense[d - 1].z;
      for (std::size_t i = 0; i < in; ++i)
        if (z[i] <= 0) dinput[i] = 0;
    }
    delta = std::move(dinput);
  }

  // delta is now d loss / d pooled output of the last conv stage.
  const std::size_t alpha = cfg.alphabet.size();
  for (std::size_t l = cfg.conv.size(); l-- > 0;) {
    const auto& layer_spec = cfg.conv[l];
    const auto& cc = cache.conv[l];
    const std::size_t F = layer_spec.filters, K = layer_spec.kernel_width;
    std::vector<double> dz(F * cc.length, 0.0);
    for (std::size_t i = 0; i < F * cc.pooled_length; ++i) {
      if (cc.pooled[i] <= 0 || delta[i] == 0) continue;
      const std::size_t f = i / cc.pooled_length;
      dz[f * cc.length + cc.arg[i]] += delta[i];
    }
    auto& gW = G[2 * l];
    auto& gB = G[2 * l + 1];
    if (l == 0) {
      for (std::size_t f = 0; f < F; ++f) {
        const double* dzf = dz.data() + f * cc.length;
        for (std::size_t t = 0; t < cc.length; ++t) {
          const double g = dzf[t];
          if (g == 0) continue;
          gB[f] += g;
          for (std::size_t j = 0; j < K; ++j) {
            const auto idx = x[t + j];
            if (idx == 0 || idx > alpha) continue;
            gW[(f * K + j) * alpha + (idx - 1)] += g;
          }
        }
      }
      break;
    }
    const auto& prev = cache.conv[l - 1];
    const std::size_t C = cfg.conv[l - 1].filters;
    const auto& W = P[2 * l].data;
    std::vector<double> dprev(C * prev.pooled_length, 0.0);
    for (std::size_t f = 0; f < F; ++f) {
      const double* dzf = dz.data() + f * cc.length;
      double bsum = 0;
      for (std::size_t t = 0; t < cc.length; ++t) bsum += dzf[t];
      gB[f] += bsum;
      for (std::size_t j = 0; j < K; ++j) {
        for (std::size_t c = 0; c < C; ++c) {
          const double* in = prev.pooled.data() + c * prev.pooled_length + j;
          double* din = dprev.data() + c * prev.pooled_length + j;
          const double w = W[(f * K + j) * C + c];
          double s = 0;
          for (std::size_t t = 0; t < cc.length; ++t) {
            s += dzf[t] * in[t];
            din[t] += dzf[t] * w;
          }
          gW[(f * K + j) * C + c] += s;
        }
      }
    }
    delta = std::move(dprev);
  }
}

void check_finite(const CnnModel& model, double lr) {
  for (const auto& t : model.params())
    for (double v : t.data)
      if (!std::isfinite(v))
        throw TrainingError("non-finite parameter after update (learning rate " +
                            std::to_string(lr) + "); lower the learning rate");
}

nlohmann::json config_to_json(const CnnConfig& c) {
  nlohmann::json j;
  j["alphabet"] = c.alphabet;
  j["max_len"] = c.max_len;
  j["conv"] = nlohmann::json::array();
  for (const auto& s : c.conv)
    j["conv"].push_back({{"filters", s.filters}, {"kernel_width", s.kernel_width},
                         {"pool_width", s.pool_width}});
  j["hidden"] = c.hidden;
  j["learning_rate"] = c.learning_rate;
  j["momentum"] = c.momentum;
  j["batch_size"] = c.batch_size;
  j["max_epochs"] = c.max_epochs;
  j["class_weights"] = c.class_weights;
  j["auto_class_weights"] = c.auto_class_weights;
  j["ccsid_weight"] = c.ccsid_weight;
  j["seed"] = c.seed;
  return j;
}

CnnConfig config_from_json(const nlohmann::json& j) {
  CnnConfig c;
  c.alphabet = j.at("alphabet").get<std::string>();
  c.max_len = j.at("max_len").get<std::size_t>();
  c.conv.clear();
  for (const auto& s : j.at("conv"))
    c.conv.push_back({s.at("filters").get<std::size_t>(), s.at("kernel_width").get<std::size_t>(),
                      s.at("pool_width").get<std::size_t>()});
  c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.momentum = j.at("momentum").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.max_epochs = j.at("max_epochs").get<std::size_t>();
  c.class_weights = j.at("class_weights").get<std::array<double, 2>>();
  c.auto_class_weights = j.at("auto_class_weights").get<bool>();
  c.ccsid_weight = j.at("ccsid_weight").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

std::vector<std::vector<std::size_t>> parameter_shapes(const CnnConfig& c,
                                                       const std::vector<std::size_t>& pooled) {
  std::vector<std::vector<std::size_t>> shapes;
  std::size_t channels = c.alphabet.size();
  for (const auto& s : c.conv) {
    shapes.push_back({s.filters, s.kernel_width, channels});
    shapes.push_back({s.filters});
    channels = s.filters;
  }
  std::size_t in = flat_size(c, pooled);
  for (std::size_t h : c.hidden) {
    shapes.push_back({h, in});
    shapes.push_back({h});
    in = h;
  }
  shapes.push_back({2, in});
  shapes.push_back({2});
  return shapes;
}

}  // namespace

void CnnConfig::validate() const {
  if (alphabet.empty()) throw InvalidArgument("CnnConfig: empty alphabet");
  text::Alphabet check(alphabet);
  if (max_len == 0) throw InvalidArgument("CnnConfig: max_len must be positive");
  if (conv.empty()) throw InvalidArgument("CnnConfig: at least one conv layer required");
  for (const auto& s : conv)
    if (s.filters == 0 || s.kernel_width == 0 || s.pool_width == 0)
      throw InvalidArgument("CnnConfig: conv filter, kernel and pool sizes must be positive");
  for (auto h : hidden)
    if (h == 0) throw InvalidArgument("CnnConfig: hidden layer sizes must be positive");
  if (!(learning_rate > 0)) throw InvalidArgument("CnnConfig: learning rate must be positive");
  if (!(momentum >= 0 && momentum < 1)) throw InvalidArgument("CnnConfig: momentum must lie in [0, 1)");
  if (batch_size == 0) throw InvalidArgument("CnnConfig: batch size must be positive");
  if (class_weights[0] <= 0 || class_weights[1] <= 0 || ccsid_weight <= 0)
    throw InvalidArgument("CnnConfig: class and source weights must be positive");
  compute_pooled_lengths(*this);
}

CnnModel::CnnModel(CnnConfig config, std::vector<Tensor> params)
    : config_(std::move(config)), params_(std::move(params)) {
  config_.validate();
  pooled_lengths_ = compute_pooled_lengths(config_);
  const auto shapes = parameter_shapes(config_, pooled_lengths_);
  if (shapes.size() != params_.size())
    throw InvalidArgument("CnnModel: expected " + std::to_string(shapes.size()) + " tensors");
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto n = std::accumulate(shapes[i].begin(), shapes[i].end(), std::size_t{1},
                                   std::multiplies<>());
    if (params_[i].shape != shapes[i] || params_[i].data.size() != n)
      throw InvalidArgument("CnnModel: tensor " + std::to_string(i) + " has the wrong shape");
  }
}

std::size_t CnnModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : params_) n += t.data.size();
  return n;
}

bool operator==(const CnnModel& a, const CnnModel& b) {
  if (a.params_.size() != b.params_.size()) return false;
  if (config_to_json(a.config_) != config_to_json(b.config_)) return false;
  for (std::size_t i = 0; i < a.params_.size(); ++i)
    if (a.params_[i].shape != b.params_[i].shape || a.params_[i].data != b.params_[i].data)
      return false;
  return true;
}

CnnModel init_model(const CnnConfig& config) {
  config.validate();
  const auto pooled = compute_pooled_lengths(config);
  const auto shapes = parameter_shapes(config, pooled);
  Rng rng(derive_seed(config.seed, "init"));
  std::vector<Tensor> params;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    Tensor t;
    t.shape = shapes[i];
    const auto n = std::accumulate(t.shape.begin(), t.shape.end(), std::size_t{1},
                                   std::multiplies<>());
    // A weight tensor and the bias that follows it share a fan-in. The first
    // conv layer sees one-hot columns, so only its kernel width counts.
    const auto& w = shapes[i - i % 2];
    std::size_t fan_in = w.size() == 3 ? w[1] * w[2] : w[1];
    if (i < 2) fan_in = w[1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    t.data.resize(n);
    for (auto& v : t.data) v = dist(rng);
    params.push_back(std::move(t));
  }
  return CnnModel(config, std::move(params));
}

std::array<double, 2> forward(const CnnModel& model, const text::CharSequence& chars) {
  Cache cache;
  forward_cached(model, chars, cache);
  return cache.probs;
}

std::vector<Example> make_examples(std::span<const corpus::LabeledMessage> messages,
                                   const CnnConfig& config) {
  const text::Alphabet alphabet(config.alphabet);
  std::vector<Example> out;
  out.reserve(messages.size());
  for (const auto& m : messages) {
    Example e;
    e.chars = text::quantize_chars(m.message.text, alphabet, config.max_len);
    e.label = m.label;
    e.weight = m.message.source == Source::CCSID ? config.ccsid_weight : 1.0;
    out.push_back(std::move(e));
  }
  return out;
}

Gradients zero_gradients(const CnnModel& model) {
  Gradients g;
  for (const auto& t : model.params()) g.emplace_back(t.data.size(), 0.0);
  return g;
}

double loss_and_gradient(const CnnModel& model, const text::CharSequence& chars,
                         BinaryInformativeness label, double weight, Gradients* grads,
                         double scale) {
  Cache cache;
  forward_cached(model, chars, cache);
  const auto y = static_cast<std::size_t>(label);
  const double loss = weight * cross_entropy(cache.logits, y);
  if (grads) backward(model, chars, cache, y, weight * scale, *grads);
  return loss;
}

double mean_loss(const CnnModel& model, std::span<const Example> examples, int threads) {
  if (examples.empty()) return 0.0;
  std::vector<double> losses(examples.size());
  const auto n = static_cast<std::ptrdiff_t>(examples.size());
  ExceptionSlot error;
#pragma omp parallel for schedule(static) num_threads(omp_threads(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    error.capture([&] {
      Cache cache;
      forward_cached(model, examples[i].chars, cache);
      losses[i] = cross_entropy(cache.logits, static_cast<std::size_t>(examples[i].label));
    });
  }
  error.rethrow();
  double sum = 0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(examples.size());
}

TrainResult train(const CnnModel& initial, std::span<const Example> training,
                  std::span<const Example> validation) {
  if (training.empty() || validation.empty())
    throw InvalidArgument("train: training and validation sets must be non-empty");
  CnnConfig cfg = initial.config();
  const int threads = omp_threads(cfg.threads);

  std::array<double, 2> class_weights = cfg.class_weights;
  if (cfg.auto_class_weights) {
    std::array<std::size_t, 2> counts{};
    for (const auto& e : training) ++counts[static_cast<std::size_t>(e.label)];
    for (std::size_t c = 0; c < 2; ++c)
      class_weights[c] = counts[c] == 0 ? 1.0
                                        : static_cast<double>(training.size()) /
                                              (2.0 * static_cast<double>(counts[c]));
  }

  CnnModel model = initial;
  TrainResult result{model, {}};
  result.trace.class_weights = class_weights;

  auto record = [&](std::size_t epoch) {
    EpochLoss el{epoch, mean_loss(model, training, threads), mean_loss(model, validation, threads)};
    if (!std::isfinite(el.training_loss) || !std::isfinite(el.validation_loss))
      throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) +
                          " (learning rate " + std::to_string(cfg.learning_rate) +
                          "); lower the learning rate");
    result.trace.epochs.push_back(el);
    return el;
  };

  double best_val = record(0).validation_loss;
  result.trace.selected_epoch = 0;

  Gradients velocity = zero_gradients(model);
  Gradients batch_grad = zero_gradients(model);
  std::vector<std::size_t> order(training.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(derive_seed(cfg.seed, "shuffle"));

  // Per-example gradients land in their own buffer and are summed in example
  // order, which keeps batches bit-identical for any thread count.
  const std::size_t max_batch = std::min(cfg.batch_size, training.size());
  std::vector<Gradients> per_example(max_batch, zero_gradients(model));
  std::vector<double> batch_losses(max_batch);

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t bs = std::min(cfg.batch_size, order.size() - start);
      const double scale = 1.0 / static_cast<double>(bs);
      ExceptionSlot error;
#pragma omp parallel for schedule(static) num_threads(threads)
      for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(bs); ++b) {
        error.capture([&] {
          auto& g = per_example[b];
          for (auto& t : g) std::fill(t.begin(), t.end(), 0.0);
          const Example& ex = training[order[start + b]];
          const double w = ex.weight * class_weights[static_cast<std::size_t>(ex.label)];
          batch_losses[b] = loss_and_gradient(model, ex.chars, ex.label, w, &g, scale);
        });
      }
      error.rethrow();
      for (std::size_t b = 0; b < bs; ++b)
        if (!std::isfinite(batch_losses[b]))
          throw TrainingError("non-finite loss in epoch " + std::to_string(epoch) +
                              " (learning rate " + std::to_string(cfg.learning_rate) +
                              "); lower the learning rate");
      for (auto& t : batch_grad) std::fill(t.begin(), t.end(), 0.0);
      for (std::size_t b = 0; b < bs; ++b)
        for (std::size_t k = 0; k < batch_grad.size(); ++k) {
          auto& dst = batch_grad[k];
          const auto& src = per_example[b][k];
          for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
        }
      auto& params = model.params();
      for (std::size_t k = 0; k < params.size(); ++k) {
        auto& p = params[k].data;
        auto& v = velocity[k];
        const auto& g = batch_grad[k];
        for (std::size_t i = 0; i < p.size(); ++i) {
          v[i] = cfg.momentum * v[i] - cfg.learning_rate * g[i];
          p[i] += v[i];
        }
      }
    }
    check_finite(model, cfg.learning_rate);

    const EpochLoss el = record(epoch);
    if (el.training_loss < el.validation_loss) {
      result.trace.crossover_epoch = epoch;
      break;
    }
    if (el.validation_loss < best_val) {
      best_val = el.validation_loss;
      result.trace.selected_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

TrainResult train(const CnnModel& initial, const corpus::Split& split) {
  const auto training = make_examples(split.train, initial.config());
  const auto validation = make_examples(split.validation, initial.config());
  return train(initial, training, validation);
}

InformativenessDecision decide(double probability_informative, double threshold) {
  if (!(threshold > 0 && threshold < 1))
    throw InvalidArgument("threshold must lie strictly between 0 and 1");
  InformativenessDecision d;
  d.probability_informative = probability_informative;
  d.threshold = threshold;
  d.decision = probability_informative >= threshold ? BinaryInformativeness::Informative
                                                    : BinaryInformativeness::NotInformative;
  return d;
}

InformativenessDecision classify(const CnnModel& model, std::string_view text,
                                 double threshold) {
  const text::Alphabet alphabet(model.config().alphabet);
  const auto probs = forward(model, text::quantize_chars(text, alphabet, model.config().max_len));
  return decide(probs[1], threshold);
}

GradientCheckResult gradient_check(const CnnModel& model, const text::CharSequence& chars,
                                   BinaryInformativeness label, double epsilon,
                                   const std::function<void(Gradients&)>& tamper) {
  if (!(epsilon > 0)) throw InvalidArgument("gradient_check: epsilon must be positive");
  Gradients analytic = zero_gradients(model);
  loss_and_gradient(model, chars, label, 1.0, &analytic);
  if (tamper) tamper(analytic);

  // Every tensor gets an even share of the 200 samples; what small bias
  // vectors cannot use goes to the larger tensors.
  constexpr std::size_t kSamples = 200;
  const std::size_t tensors = model.params().size();
  std::vector<std::size_t> quota(tensors);
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < tensors; ++k) {
    quota[k] = std::min(model.params()[k].data.size(), (kSamples + tensors - 1) / tensors);
    assigned += quota[k];
  }
  for (std::size_t k = 0; k < tensors && assigned < kSamples; ++k) {
    const std::size_t extra =
        std::min(model.params()[k].data.size() - quota[k], kSamples - assigned);
    quota[k] += extra;
    assigned += extra;
  }
  Rng rng(derive_seed(model.config().seed, "gradient-check"));

  CnnModel probe = model;
  GradientCheckResult result;
  for (std::size_t k = 0; k < tensors; ++k) {
    const std::size_t n = probe.params()[k].data.size();
    const auto picks = sample_indices(n, quota[k], rng());
    for (std::size_t i : picks) {
      double& p = probe.params()[k].data[i];
      const double saved = p;
      p = saved + epsilon;
      const double up = loss_and_gradient(probe, chars, label, 1.0, nullptr);
      p = saved - epsilon;
      const double down = loss_and_gradient(probe, chars, label, 1.0, nullptr);
      p = saved;
      const double numeric = (up - down) / (2 * epsilon);
      const double a = analytic[k][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      result.max_relative_error = std::max(result.max_relative_error, std::abs(a - numeric) / denom);
      ++result.checked;
    }
  }
  return result;
}

void save_model(const CnnModel& model, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic) - 1);
  binary::write_le<std::uint32_t>(out, kFormatVersion);
  binary::write_string(out, config_to_json(model.config()).dump());
  binary::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.params().size()));
  for (const auto& t : model.params()) {
    std::vector<std::uint64_t> shape(t.shape.begin(), t.shape.end());
    binary::write_tensor(out, shape, t.data);
  }
  if (!out) throw DataError("failed to write model");
}

void save_model(const CnnModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_model(model, out);
}

CnnModel load_model(std::istream& in) {
  char magic[sizeof(kMagic) - 1];
  if (!in.read(magic, sizeof(magic)) || std::string_view(magic, sizeof(magic)) != kMagic)
    throw DataError("not an informativeness model file");
  const auto version = binary::read_le<std::uint32_t>(in);
  if (version != kFormatVersion)
    throw DataError("unsupported informativeness model version " + std::to_string(version));
  CnnConfig config;
  try {
    config = config_from_json(nlohmann::json::parse(binary::read_string(in)));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: bad config: ") + e.what());
  }
  const auto count = binary::read_le<std::uint32_t>(in);
  if (count > 1024) throw DataError("model file: too many tensors");
  std::vector<Tensor> params;
  for (std::uint32_t i = 0; i < count; ++i) {
    auto raw = binary::read_tensor(in);
    params.push_back({std::vector<std::size_t>(raw.shape.begin(), raw.shape.end()),
                      std::move(raw.data)});
  }
  try {
    return CnnModel(std::move(config), std::move(params));
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

CnnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_model(in);
}

}  // namespace triage::informativeness
