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

#ifndef SLASCORE_METRICS_HPP_
#define SLASCORE_METRICS_HPP_

#include <array>
#include <cstddef>
#include <span>

#include <nlohmann/json.hpp>

#include "slascore/classifier.hpp"

namespace slascore {

enum class PassFail { fail, pass };

// Floors a fractional holistic score to a class in 1..5.
// Throws DataError outside [1, 5] or for NaN.
int discretize(double raw_score);

// Classes above 3 pass. Throws DataError outside 1..5.
PassFail binarize(int class_label);

struct ClassStats {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  double weighted_f1 = 0.0;
  double accuracy = 0.0;
  double binary_accuracy = 0.0;
  std::size_t total = 0;
  std::array<ClassStats, kNumClasses> per_class{};
  // confusion[label - 1][pred - 1]
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};

  nlohmann::ordered_json to_json() const;
};

// Weighted F1, accuracy and pass/fail accuracy. 0/0 precision, recall and F1
// are defined as 0. Throws DataError on a length mismatch, empty input or a
// class outside 1..5.
EvalReport evaluate(std::span<const int> predictions, std::span<const int> labels);

}  // namespace slascore

#endif  // SLASCORE_METRICS_HPP_
