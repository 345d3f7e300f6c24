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

#include "slascore/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "slascore/classifier.hpp"
#include "slascore/rng.hpp"

namespace slascore {

namespace {

constexpr double kRelativeErrorFloor = 1e-6;

std::array<std::span<double>, 4> tensors(ClassifierParams& p) {
  return {p.proj_weights.values(), std::span(p.proj_bias), p.pred_weights.values(),
          std::span(p.pred_bias)};
}

}  // namespace

double gradient_relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), kRelativeErrorFloor});
  return std::abs(analytic - numeric) / scale;
}

GradientCheckReport gradient_check(const GradientCheckOptions& options) {
  GradientCheckReport report;
  SplitMix64 rng(options.seed);
  for (std::size_t draw = 0; draw < options.draws; ++draw) {
    const std::size_t n_aux = draw % 3;
    const auto activation =
        (draw / 3) % 2 == 0 ? ProjectionActivation::gelu : ProjectionActivation::identity;
    const ClassifierShape shape{2 * options.stream_dim, options.hidden_dim, n_aux, kNumClasses};

    ClassifierParams params = ClassifierParams::zeros(shape, activation);
    for (auto t : tensors(params)) {
      for (double& v : t) v = rng.uniform(-1.0, 1.0);
    }
    std::vector<Example> batch(options.batch_size);
    for (auto& ex : batch) {
      ex.input.resize(shape.input_dim);
      for (double& v : ex.input) v = rng.uniform(-2.0, 2.0);
      ex.aux.resize(n_aux);
      for (double& v : ex.aux) v = rng.uniform(-2.0, 2.0);
      ex.label = static_cast<int>(rng.below(kNumClasses)) + 1;
    }

    LossAndGrad lg = loss_and_grad(batch, params);
    auto analytic = tensors(lg.grad);
    auto values = tensors(params);
    for (std::size_t k = 0; k < values.size(); ++k) {
      for (std::size_t i = 0; i < values[k].size(); ++i) {
        const double saved = values[k][i];
        values[k][i] = saved + options.step;
        const double up = batch_loss(batch, params);
        values[k][i] = saved - options.step;
        const double down = batch_loss(batch, params);
        values[k][i] = saved;
        const double numeric = (up - down) / (2.0 * options.step);
        const double err = gradient_relative_error(analytic[k][i], numeric);
        report.max_error_by_tensor[k] = std::max(report.max_error_by_tensor[k], err);
        report.max_error_by_fusion[n_aux] = std::max(report.max_error_by_fusion[n_aux], err);
        report.max_error = std::max(report.max_error, err);
        ++report.elements_checked;
      }
    }
    ++report.draws;
  }
  return report;
}

}  // namespace slascore
