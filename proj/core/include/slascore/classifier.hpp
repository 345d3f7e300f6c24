// Copyright 2026 The slascore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SLASCORE_CLASSIFIER_HPP_
#define SLASCORE_CLASSIFIER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "slascore/aux_scores.hpp"
#include "slascore/matrix.hpp"

namespace slascore {

inline constexpr std::size_t kNumClasses = 5;
inline constexpr std::size_t kBottleneckDim = 512;

// Which inputs feed the classifier. Switching one off removes its columns
// from the parameter tensors rather than zeroing them.
struct FeatureFlags {
  bool acoustic = true;
  bool linguistic = true;
  bool sts = true;
  bool itc = true;

  std::size_t n_streams() const { return (acoustic ? 1 : 0) + (linguistic ? 1 : 0); }
  std::size_t n_aux() const { return (sts ? 1 : 0) + (itc ? 1 : 0); }
  bool operator==(const FeatureFlags&) const = default;
};

enum class ProjectionActivation { gelu, identity };

struct ClassifierShape {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = kBottleneckDim;
  std::size_t n_aux = 0;
  std::size_t n_classes = kNumClasses;

  bool operator==(const ClassifierShape&) const = default;
};

// f_proj: hidden x input affine map (+ GELU); f_pred: classes x (hidden + aux).
struct ClassifierParams {
  Matrix proj_weights;
  std::vector<double> proj_bias;
  Matrix pred_weights;
  std::vector<double> pred_bias;
  ProjectionActivation activation = ProjectionActivation::gelu;

  static ClassifierParams zeros(const ClassifierShape& shape,
                                ProjectionActivation activation = ProjectionActivation::gelu);
  ClassifierShape shape() const;
  bool operator==(const ClassifierParams&) const = default;
};

// One training or evaluation sample. `input` is [v_enc; v_dec] restricted to
// the active streams, `aux` is [s_sts; s_itc] restricted to the active scores.
struct Example {
  std::vector<double> input;
  std::vector<double> aux;
  int label = 1;  // class 1..5
};

struct Prediction {
  std::vector<double> logits;
  std::vector<double> probs;

  int predicted_class() const;  // 1-based argmax, lowest index on ties
};

double gelu(double x);             // x * Phi(x), exact erf form
double gelu_derivative(double x);  // Phi(x) + x * phi(x)

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

// v_bnf = act(W_proj x + b_proj).
std::vector<double> project(std::span<const double> input, const ClassifierParams& params);
std::vector<double> project(std::span<const double> v_enc, std::span<const double> v_dec,
                            const ClassifierParams& params);

// u = [v_bnf; s_sts?; s_itc?]. Throws DataError when a flagged score is absent.
std::vector<double> fuse(std::span<const double> v_bnf, const AuxScores& scores,
                         const FeatureFlags& flags);

// o = W_pred u + b_pred, probs = softmax(o).
Prediction predict(std::span<const double> fused, const ClassifierParams& params);

// Full forward pass for one example.
Prediction classify(const Example& example, const ClassifierParams& params);

struct LossAndGrad {
  double loss = 0.0;
  ClassifierParams grad;
};

// Mean softmax cross-entropy over the batch and its analytic gradient.
LossAndGrad loss_and_grad(std::span<const Example> batch, const ClassifierParams& params);

// Forward-only mean cross-entropy.
double batch_loss(std::span<const Example> batch, const ClassifierParams& params);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

struct TrainConfig {
  std::size_t steps = 1000;
  double learning_rate = 7.5e-4;
  std::size_t batch_size = 4;
  std::size_t grad_accum = 2;
  std::uint64_t seed = 42;
  AdamConfig adam;
  std::size_t hidden_dim = kBottleneckDim;
  ProjectionActivation activation = ProjectionActivation::gelu;

  void validate() const;  // ConfigError unless steps, batch_size, grad_accum >= 1 (steps may be 0)
  bool operator==(const TrainConfig&) const = default;
};

// Weights ~ U(-1/sqrt(fan_in), +1/sqrt(fan_in)) drawn row-major, proj first;
// biases zero.
ClassifierParams init_params(const ClassifierShape& shape, ProjectionActivation activation,
                             std::uint64_t seed);

struct TrainResult {
  ClassifierParams params;
  std::vector<double> step_losses;  // mean micro-batch loss of each optimizer step
};

// Adam over `steps` optimizer steps. Each step averages the gradients of
// grad_accum micro-batches of batch_size samples drawn from a seeded
// permutation that is reshuffled whenever it is exhausted.
// Throws DataError for an empty or ragged dataset.
TrainResult train(std::span<const Example> dataset, const TrainConfig& config);

double accuracy(std::span<const Example> dataset, const ClassifierParams& params);

// Serialised classifier: parameter tensors plus model.json metadata.
struct ModelArtifact {
  ClassifierParams params;
  FeatureFlags features;
  TrainConfig train;
  std::string feature_key;  // identifies the feature store the model was trained on
};

void save_model(const std::filesystem::path& dir, const ModelArtifact& model);
ModelArtifact load_model(const std::filesystem::path& dir);

void to_json(nlohmann::json& j, const FeatureFlags& f);
void to_json(nlohmann::ordered_json& j, const FeatureFlags& f);
void from_json(const nlohmann::json& j, FeatureFlags& f);
void to_json(nlohmann::json& j, const TrainConfig& c);
void to_json(nlohmann::ordered_json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

std::string to_string(ProjectionActivation a);
ProjectionActivation activation_from_string(const std::string& s);

}  // namespace slascore

#endif  // SLASCORE_CLASSIFIER_HPP_
