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
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "triage/corpus.hpp"
#include "triage/text.hpp"
#include "triage/types.hpp"

// Character-level convolutional classifier that separates informative from
// non-informative messages.
namespace triage::informativeness {

struct ConvLayerSpec {
  std::size_t filters = 64;
  std::size_t kernel_width = 7;
  std::size_t pool_width = 3;
};

struct CnnConfig {
  std::string alphabet = text::Alphabet::standard().symbols();
  std::size_t max_len = text::kDefaultMaxLen;
  std::vector<ConvLayerSpec> conv = {{64, 7, 3}, {64, 3, 3}};
  std::vector<std::size_t> hidden = {128};

  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  // Cross-entropy weight per class, indexed by BinaryInformativeness. With
  // auto_class_weights the trainer replaces them by inverse class frequency
  // of the training set.
  std::array<double, 2> class_weights = {1.0, 1.0};
  bool auto_class_weights = true;
  // Extra loss multiplier for CCSID-sourced training examples.
  double ccsid_weight = 2.0;
  std::uint64_t seed = 1;
  // Worker threads for batch gradients and loss evaluation; results do not
  // depend on this value.
  int threads = 0;  // 0 = OpenMP default

  void validate() const;  // throws InvalidArgument
};

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;
};

// Parameters in layer order: for every conv layer a [filters, width, channels]
// weight and a [filters] bias, then [out, in] / [out] pairs for the hidden
// layers and the two-way output layer.
class CnnModel {
 public:
  CnnModel() = default;
  CnnModel(CnnConfig config, std::vector<Tensor> params);

  const CnnConfig& config() const { return config_; }
  std::vector<Tensor>& params() { return params_; }
  const std::vector<Tensor>& params() const { return params_; }
  std::size_t parameter_count() const;
  // Length of each conv stage output after pooling.
  const std::vector<std::size_t>& pooled_lengths() const { return pooled_lengths_; }

  friend bool operator==(const CnnModel& a, const CnnModel& b);

 private:
  CnnConfig config_;
  std::vector<Tensor> params_;
  std::vector<std::size_t> pooled_lengths_;
};

// Zero-mean uniform parameters in [-1/sqrt(fan_in), 1/sqrt(fan_in)], drawn
// from config.seed.
CnnModel init_model(const CnnConfig& config);

// Softmax over {NotInformative, Informative}. Throws InvalidArgument when the
// sequence length differs from config().max_len.
std::array<double, 2> forward(const CnnModel& model, const text::CharSequence& chars);

struct Example {
  text::CharSequence chars;
  BinaryInformativeness label = BinaryInformativeness::NotInformative;
  double weight = 1.0;  // per-example multiplier (source weighting)
};

std::vector<Example> make_examples(std::span<const corpus::LabeledMessage> messages,
                                   const CnnConfig& config);

using Gradients = std::vector<std::vector<double>>;

// Weighted cross-entropy of one example; adds scale * gradient into `grads`
// when given (grads must match the parameter layout).
double loss_and_gradient(const CnnModel& model, const text::CharSequence& chars,
                         BinaryInformativeness label, double weight, Gradients* grads,
                         double scale = 1.0);

Gradients zero_gradients(const CnnModel& model);

// Mean unweighted cross-entropy over a set.
double mean_loss(const CnnModel& model, std::span<const Example> examples, int threads = 0);

struct EpochLoss {
  std::size_t epoch = 0;  // 0 = before any update
  double training_loss = 0;
  double validation_loss = 0;
};

struct TrainingTrace {
  std::vector<EpochLoss> epochs;
  std::size_t selected_epoch = 0;
  std::optional<std::size_t> crossover_epoch;  // first epoch with train < validation
  std::array<double, 2> class_weights = {1.0, 1.0};
};

struct TrainResult {
  CnnModel model;  // checkpoint of selected_epoch
  TrainingTrace trace;
};

// Momentum SGD on class-weighted cross-entropy. After each epoch both losses
// are measured; training stops at the first epoch whose training loss is
// strictly below its validation loss, or at max_epochs. The returned model is
// the checkpoint with the lowest validation loss before that point. Throws
// TrainingError if the loss becomes non-finite.
TrainResult train(const CnnModel& initial, std::span<const Example> training,
                  std::span<const Example> validation);
TrainResult train(const CnnModel& initial, const corpus::Split& split);

struct InformativenessDecision {
  double probability_informative = 0;
  BinaryInformativeness decision = BinaryInformativeness::NotInformative;
  double threshold = 0.5;
};

InformativenessDecision decide(double probability_informative, double threshold);
InformativenessDecision classify(const CnnModel& model, std::string_view text,
                                 double threshold = 0.5);

struct GradientCheckResult {
  double max_relative_error = 0;
  std::size_t checked = 0;
};

// Central finite differences against backpropagation on a deterministic
// sample of parameters from every tensor (at least 200 in total, or all of
// them for smaller models). `tamper` may rewrite the analytic gradients
// before the comparison.
GradientCheckResult gradient_check(const CnnModel& model, const text::CharSequence& chars,
                                   BinaryInformativeness label, double epsilon = 1e-5,
                                   const std::function<void(Gradients&)>& tamper = {});

// Binary model file: magic, format version, JSON config, then each tensor as
// rank, dimensions and little-endian float64 values.
void save_model(const CnnModel& model, std::ostream& out);
void save_model(const CnnModel& model, const std::filesystem::path& path);
CnnModel load_model(std::istream& in);
CnnModel load_model(const std::filesystem::path& path);

}  // namespace triage::informativeness
