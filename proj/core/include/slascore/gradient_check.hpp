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

#ifndef SLASCORE_GRADIENT_CHECK_HPP_
#define SLASCORE_GRADIENT_CHECK_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace slascore {

struct GradientCheckOptions {
  std::size_t draws = 100;
  std::uint64_t seed = 7;
  double step = 1e-5;
  std::size_t stream_dim = 3;  // per-stream width; the input is two streams
  std::size_t hidden_dim = 7;
  std::size_t batch_size = 3;
};

// Per-element relative error |a - n| / max(|a|, |n|, floor).
double gradient_relative_error(double analytic, double numeric);

struct GradientCheckReport {
  std::size_t draws = 0;
  std::size_t elements_checked = 0;
  // proj_weights, proj_bias, pred_weights, pred_bias
  std::array<double, 4> max_error_by_tensor{};
  // n_aux = 0, 1, 2
  std::array<double, 3> max_error_by_fusion{};
  double max_error = 0.0;
};

inline constexpr std::array<const char*, 4> kParameterTensorNames = {
    "proj_weights", "proj_bias", "pred_weights", "pred_bias"};

// Compares loss_and_grad against central differences on random parameters,
// inputs and labels, cycling through the three fusion settings
// (no scores, STS only, STS + ITC) and both activations.
GradientCheckReport gradient_check(const GradientCheckOptions& options = {});

}  // namespace slascore

#endif  // SLASCORE_GRADIENT_CHECK_HPP_
