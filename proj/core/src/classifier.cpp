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

#include "slascore/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include <nlohmann/json.hpp>

#include "slascore/error.hpp"
#include "slascore/rng.hpp"
#include "slascore/tensor_io.hpp"

namespace slascore {

namespace {

void check_lengths(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ShapeError(std::string(what) + " has length " + std::to_string(got) + ", expected " +
                     std::to_string(want));
  }
}

// Per-sample forward state reused by the backward pass.
struct Forward {
  std::vector<double> pre;     // W_proj x + b_proj
  std::vector<double> fused;   // [act(pre); aux]
  std::vector<double> logits;
  std::vector<double> probs;
  double loss = 0.0;
};

double log_sum_exp(std::span<const double> v) {
  const double peak = *std::max_element(v.begin(), v.end());
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - peak);
  return peak + std::log(acc);
}

Forward forward(const Example& ex, const ClassifierParams& p) {
  const ClassifierShape s = p.shape();
  check_lengths(ex.input.size(), s.input_dim, "classifier input");
  check_lengths(ex.aux.size(), s.n_aux, "auxiliary score vector");
  if (ex.label < 1 || static_cast<std::size_t>(ex.label) > s.n_classes) {
    throw DataError("label " + std::to_string(ex.label) + " outside 1.." +
                    std::to_string(s.n_classes));
  }
  Forward f;
  f.pre.resize(s.hidden_dim);
  f.fused.resize(s.hidden_dim + s.n_aux);
  for (std::size_t h = 0; h < s.hidden_dim; ++h) {
    const auto w = p.proj_weights.row(h);
    double acc = p.proj_bias[h];
    for (std::size_t i = 0; i < s.input_dim; ++i) acc += w[i] * ex.input[i];
    f.pre[h] = acc;
    f.fused[h] = p.activation == ProjectionActivation::gelu ? gelu(acc) : acc;
  }
  std::copy(ex.aux.begin(), ex.aux.end(), f.fused.begin() + static_cast<std::ptrdiff_t>(s.hidden_dim));

  f.logits.resize(s.n_classes);
  for (std::size_t c = 0; c < s.n_classes; ++c) {
    const auto w = p.pred_weights.row(c);
    double acc = p.pred_bias[c];
    for (std::size_t k = 0; k < f.fused.size(); ++k) acc += w[k] * f.fused[k];
    f.logits[c] = acc;
  }
  f.probs = softmax(f.logits);
  f.loss = log_sum_exp(f.logits) - f.logits[static_cast<std::size_t>(ex.label - 1)];
  return f;
}

void axpy(std::span<double> y, double a, std::span<const double> x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

ClassifierParams ClassifierParams::zeros(const ClassifierShape& shape,
                                         ProjectionActivation activation) {
  ClassifierParams p;
  p.proj_weights = Matrix(shape.hidden_dim, shape.input_dim);
  p.proj_bias.assign(shape.hidden_dim, 0.0);
  p.pred_weights = Matrix(shape.n_classes, shape.hidden_dim + shape.n_aux);
  p.pred_bias.assign(shape.n_classes, 0.0);
  p.activation = activation;
  return p;
}

ClassifierShape ClassifierParams::shape() const {
  return {proj_weights.cols(), proj_weights.rows(), pred_weights.cols() - proj_weights.rows(),
          pred_weights.rows()};
}

int Prediction::predicted_class() const {
  const auto it = std::max_element(probs.begin(), probs.end());
  return static_cast<int>(std::distance(probs.begin(), it)) + 1;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_derivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw EmptyInputError("softmax of an empty vector");
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> project(std::span<const double> input, const ClassifierParams& params) {
  check_lengths(input.size(), params.proj_weights.cols(), "projection input");
  std::vector<double> out(params.proj_weights.rows());
  for (std::size_t h = 0; h < out.size(); ++h) {
    const auto w = params.proj_weights.row(h);
    double acc = params.proj_bias[h];
    for (std::size_t i = 0; i < input.size(); ++i) acc += w[i] * input[i];
    out[h] = params.activation == ProjectionActivation::gelu ? gelu(acc) : acc;
  }
  return out;
}

std::vector<double> project(std::span<const double> v_enc, std::span<const double> v_dec,
                            const ClassifierParams& params) {
  if (v_enc.size() != v_dec.size()) {
    throw ShapeError("acoustic and linguistic embeddings differ in width");
  }
  std::vector<double> joined(v_enc.begin(), v_enc.end());
  joined.insert(joined.end(), v_dec.begin(), v_dec.end());
  return project(joined, params);
}

std::vector<double> fuse(std::span<const double> v_bnf, const AuxScores& scores,
                         const FeatureFlags& flags) {
  std::vector<double> u(v_bnf.begin(), v_bnf.end());
  if (flags.sts) {
    if (!scores.sts) throw DataError("STS score requested but not available");
    u.push_back(*scores.sts);
  }
  if (flags.itc) {
    if (!scores.itc) throw DataError("ITC score requested but not available");
    u.push_back(*scores.itc);
  }
  return u;
}

Prediction predict(std::span<const double> fused, const ClassifierParams& params) {
  check_lengths(fused.size(), params.pred_weights.cols(), "fused representation");
  Prediction pred;
  pred.logits.resize(params.pred_weights.rows());
  for (std::size_t c = 0; c < pred.logits.size(); ++c) {
    const auto w = params.pred_weights.row(c);
    double acc = params.pred_bias[c];
    for (std::size_t k = 0; k < fused.size(); ++k) acc += w[k] * fused[k];
    pred.logits[c] = acc;
  }
  pred.probs = softmax(pred.logits);
  return pred;
}

Prediction classify(const Example& example, const ClassifierParams& params) {
  std::vector<double> u = project(example.input, params);
  check_lengths(example.aux.size(), params.shape().n_aux, "auxiliary score vector");
  u.insert(u.end(), example.aux.begin(), example.aux.end());
  return predict(u, params);
}

double batch_loss(std::span<const Example> batch, const ClassifierParams& params) {
  if (batch.empty()) throw EmptyInputError("loss over an empty batch");
  double total = 0.0;
  for (const auto& ex : batch) total += forward(ex, params).loss;
  return total / static_cast<double>(batch.size());
}

LossAndGrad loss_and_grad(std::span<const Example> batch, const ClassifierParams& params) {
  if (batch.empty()) throw EmptyInputError("loss over an empty batch");
  const ClassifierShape s = params.shape();
  LossAndGrad out{0.0, ClassifierParams::zeros(s, params.activation)};
  const double scale = 1.0 / static_cast<double>(batch.size());

  std::vector<double> d_logits(s.n_classes);
  std::vector<double> d_pre(s.hidden_dim);
  for (const auto& ex : batch) {
    const Forward f = forward(ex, params);
    out.loss += f.loss * scale;

    for (std::size_t c = 0; c < s.n_classes; ++c) {
      d_logits[c] = (f.probs[c] - (static_cast<int>(c) + 1 == ex.label ? 1.0 : 0.0)) * scale;
    }
    for (std::size_t c = 0; c < s.n_classes; ++c) {
      axpy(out.grad.pred_weights.row(c), d_logits[c], f.fused);
      out.grad.pred_bias[c] += d_logits[c];
    }
    for (std::size_t h = 0; h < s.hidden_dim; ++h) {
      double d_hidden = 0.0;
      for (std::size_t c = 0; c < s.n_classes; ++c) {
        d_hidden += params.pred_weights(c, h) * d_logits[c];
      }
      d_pre[h] = params.activation == ProjectionActivation::gelu
                     ? d_hidden * gelu_derivative(f.pre[h])
                     : d_hidden;
    }
    for (std::size_t h = 0; h < s.hidden_dim; ++h) {
      if (d_pre[h] == 0.0) continue;
      axpy(out.grad.proj_weights.row(h), d_pre[h], ex.input);
      out.grad.proj_bias[h] += d_pre[h];
    }
  }
  return out;
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (grad_accum < 1) throw ConfigError("grad_accum must be at least 1");
  if (hidden_dim < 1) throw ConfigError("hidden_dim must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
}

ClassifierParams init_params(const ClassifierShape& shape, ProjectionActivation activation,
                             std::uint64_t seed) {
  ClassifierParams p = ClassifierParams::zeros(shape, activation);
  SplitMix64 rng(seed);
  auto fill = [&rng](Matrix& m) {
    if (m.cols() == 0) return;
    const double bound = 1.0 / std::sqrt(static_cast<double>(m.cols()));
    for (double& w : m.values()) w = (2.0 * rng.uniform01() - 1.0) * bound;
  };
  fill(p.proj_weights);
  fill(p.pred_weights);
  return p;
}

TrainResult train(std::span<const Example> dataset, const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw DataError("cannot train on an empty dataset");
  const ClassifierShape shape{dataset.front().input.size(), config.hidden_dim,
                              dataset.front().aux.size(), kNumClasses};
  for (const auto& ex : dataset) {
    if (ex.input.size() != shape.input_dim || ex.aux.size() != shape.n_aux) {
      throw DataError("training examples have inconsistent feature widths");
    }
  }

  TrainResult result{init_params(shape, config.activation, config.seed), {}};
  if (config.steps == 0) return result;

  // Shuffling continues from a generator seeded independently of the init.
  SplitMix64 rng(config.seed ^ 0xD1B54A32D192ED03ULL);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span(order));
  std::size_t cursor = 0;

  ClassifierParams& params = result.params;
  ClassifierParams m1 = ClassifierParams::zeros(shape, config.activation);
  ClassifierParams m2 = ClassifierParams::zeros(shape, config.activation);
  ClassifierParams grad = ClassifierParams::zeros(shape, config.activation);

  auto tensors = [](ClassifierParams& p) {
    return std::array<std::span<double>, 4>{p.proj_weights.values(), std::span(p.proj_bias),
                                            p.pred_weights.values(), std::span(p.pred_bias)};
  };

  std::vector<Example> micro;
  micro.reserve(config.batch_size);
  result.step_losses.reserve(config.steps);
  const double accum_scale = 1.0 / static_cast<double>(config.grad_accum);
  const AdamConfig& adam = config.adam;

  for (std::size_t step = 1; step <= config.steps; ++step) {
    for (auto t : tensors(grad)) std::fill(t.begin(), t.end(), 0.0);
    double step_loss = 0.0;
    for (std::size_t a = 0; a < config.grad_accum; ++a) {
      micro.clear();
      for (std::size_t b = 0; b < config.batch_size; ++b) {
        if (cursor == order.size()) {
          rng.shuffle(std::span(order));
          cursor = 0;
        }
        micro.push_back(dataset[order[cursor++]]);
      }
      LossAndGrad lg = loss_and_grad(micro, params);
      step_loss += lg.loss * accum_scale;
      auto dst = tensors(grad);
      auto src = tensors(lg.grad);
      for (std::size_t k = 0; k < dst.size(); ++k) axpy(dst[k], accum_scale, src[k]);
    }
    result.step_losses.push_back(step_loss);

    const double bias1 = 1.0 - std::pow(adam.beta1, static_cast<double>(step));
    const double bias2 = 1.0 - std::pow(adam.beta2, static_cast<double>(step));
    auto p = tensors(params);
    auto g = tensors(grad);
    auto v1 = tensors(m1);
    auto v2 = tensors(m2);
    for (std::size_t k = 0; k < p.size(); ++k) {
      for (std::size_t i = 0; i < p[k].size(); ++i) {
        v1[k][i] = adam.beta1 * v1[k][i] + (1.0 - adam.beta1) * g[k][i];
        v2[k][i] = adam.beta2 * v2[k][i] + (1.0 - adam.beta2) * g[k][i] * g[k][i];
        const double m_hat = v1[k][i] / bias1;
        const double v_hat = v2[k][i] / bias2;
        p[k][i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + adam.epsilon);
      }
    }
  }
  return result;
}

double accuracy(std::span<const Example> dataset, const ClassifierParams& params) {
  if (dataset.empty()) throw EmptyInputError("accuracy over an empty dataset");
  std::size_t hits = 0;
  for (const auto& ex : dataset) hits += classify(ex, params).predicted_class() == ex.label;
  return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

std::string to_string(ProjectionActivation a) {
  return a == ProjectionActivation::gelu ? "gelu" : "identity";
}

ProjectionActivation activation_from_string(const std::string& s) {
  if (s == "gelu") return ProjectionActivation::gelu;
  if (s == "identity" || s == "none") return ProjectionActivation::identity;
  throw ConfigError("unknown projection activation \"" + s + "\"");
}

namespace {

template <typename Json>
void flags_to_json(Json& j, const FeatureFlags& f) {
  j = {{"acoustic", f.acoustic}, {"linguistic", f.linguistic}, {"sts", f.sts}, {"itc", f.itc}};
}

template <typename Json>
void train_to_json(Json& j, const TrainConfig& c) {
  j = {{"steps", c.steps},
       {"learning_rate", c.learning_rate},
       {"batch_size", c.batch_size},
       {"grad_accum", c.grad_accum},
       {"seed", c.seed},
       {"adam", {{"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"epsilon", c.adam.epsilon}}},
       {"hidden_dim", c.hidden_dim},
       {"projection_activation", to_string(c.activation)}};
}

}  // namespace

void to_json(nlohmann::json& j, const FeatureFlags& f) { flags_to_json(j, f); }
void to_json(nlohmann::ordered_json& j, const FeatureFlags& f) { flags_to_json(j, f); }

void from_json(const nlohmann::json& j, FeatureFlags& f) {
  const FeatureFlags d;
  f.acoustic = j.value("acoustic", d.acoustic);
  f.linguistic = j.value("linguistic", d.linguistic);
  f.sts = j.value("sts", d.sts);
  f.itc = j.value("itc", d.itc);
}

void to_json(nlohmann::json& j, const TrainConfig& c) { train_to_json(j, c); }
void to_json(nlohmann::ordered_json& j, const TrainConfig& c) { train_to_json(j, c); }

void from_json(const nlohmann::json& j, TrainConfig& c) {
  const TrainConfig d;
  c.steps = j.value("steps", d.steps);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.grad_accum = j.value("grad_accum", d.grad_accum);
  c.seed = j.value("seed", d.seed);
  c.hidden_dim = j.value("hidden_dim", d.hidden_dim);
  c.activation = activation_from_string(
      j.value("projection_activation", to_string(d.activation)));
  c.adam = d.adam;
  if (const auto it = j.find("adam"); it != j.end()) {
    c.adam.beta1 = it->value("beta1", d.adam.beta1);
    c.adam.beta2 = it->value("beta2", d.adam.beta2);
    c.adam.epsilon = it->value("epsilon", d.adam.epsilon);
  }
}

void save_model(const std::filesystem::path& dir, const ModelArtifact& model) {
  std::filesystem::create_directories(dir);
  const auto& p = model.params;
  write_tensor(dir / "proj_weights.tensor", tensor_from_matrix("proj_weights", p.proj_weights));
  write_tensor(dir / "proj_bias.tensor", tensor_from_vector("proj_bias", p.proj_bias));
  write_tensor(dir / "pred_weights.tensor", tensor_from_matrix("pred_weights", p.pred_weights));
  write_tensor(dir / "pred_bias.tensor", tensor_from_vector("pred_bias", p.pred_bias));

  const ClassifierShape s = p.shape();
  nlohmann::ordered_json meta;
  meta["format"] = "slascore-classifier-v1";
  meta["shape"] = {{"input_dim", s.input_dim},
                   {"hidden_dim", s.hidden_dim},
                   {"n_aux", s.n_aux},
                   {"n_classes", s.n_classes}};
  meta["features"] = model.features;
  meta["projection_activation"] = to_string(p.activation);
  meta["seed"] = model.train.seed;
  meta["train"] = model.train;
  meta["feature_key"] = model.feature_key;

  std::ofstream out(dir / "model.json", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "model.json").string());
  out << meta.dump(2) << '\n';
}

ModelArtifact load_model(const std::filesystem::path& dir) {
  std::ifstream in(dir / "model.json");
  if (!in) throw IoError("cannot read " + (dir / "model.json").string());
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError("model.json is not valid JSON: " + std::string(e.what()));
  }

  ModelArtifact model;
  try {
    model.features = meta.at("features").get<FeatureFlags>();
    model.train = meta.at("train").get<TrainConfig>();
    model.feature_key = meta.value("feature_key", std::string());
    model.params.activation = activation_from_string(meta.at("projection_activation"));
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError("model.json is incomplete: " + std::string(e.what()));
  }
  auto& p = model.params;
  p.proj_weights = matrix_from_tensor(read_tensor(dir / "proj_weights.tensor"));
  p.proj_bias = vector_from_tensor(read_tensor(dir / "proj_bias.tensor"));
  p.pred_weights = matrix_from_tensor(read_tensor(dir / "pred_weights.tensor"));
  p.pred_bias = vector_from_tensor(read_tensor(dir / "pred_bias.tensor"));

  if (p.proj_bias.size() != p.proj_weights.rows() || p.pred_bias.size() != p.pred_weights.rows() ||
      p.pred_weights.cols() < p.proj_weights.rows()) {
    throw IntegrityError("classifier tensors in " + dir.string() + " have inconsistent shapes");
  }
  const ClassifierShape s = p.shape();
  if (s.n_aux != model.features.n_aux()) {
    throw IntegrityError("model.json feature flags disagree with pred_weights columns");
  }
  return model;
}

}  // namespace slascore
