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

#include "slascore/metrics.hpp"

#include <cmath>
#include <string>

#include "slascore/error.hpp"

namespace slascore {

namespace {

void check_class(int c) {
  if (c < 1 || c > static_cast<int>(kNumClasses)) {
    throw DataError("class " + std::to_string(c) + " outside 1..5");
  }
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

int discretize(double raw_score) {
  if (!(raw_score >= 1.0 && raw_score <= 5.0)) {
    throw DataError("holistic score " + std::to_string(raw_score) + " outside [1, 5]");
  }
  return static_cast<int>(std::floor(raw_score));
}

PassFail binarize(int class_label) {
  check_class(class_label);
  return class_label > 3 ? PassFail::pass : PassFail::fail;
}

EvalReport evaluate(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw DataError("got " + std::to_string(predictions.size()) + " predictions for " +
                    std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw DataError("cannot evaluate an empty set");

  EvalReport r;
  r.total = labels.size();
  std::size_t hits = 0;
  std::size_t binary_hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    check_class(predictions[i]);
    check_class(labels[i]);
    ++r.confusion[labels[i] - 1][predictions[i] - 1];
    hits += predictions[i] == labels[i];
    binary_hits += binarize(predictions[i]) == binarize(labels[i]);
  }

  double weighted = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const std::size_t tp = r.confusion[c][c];
    std::size_t support = 0;
    std::size_t predicted = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      support += r.confusion[c][k];
      predicted += r.confusion[k][c];
    }
    ClassStats& s = r.per_class[c];
    s.support = support;
    s.precision = ratio(tp, predicted);
    s.recall = ratio(tp, support);
    s.f1 = ratio(2 * tp, predicted + support);
    weighted += static_cast<double>(support) * s.f1;
  }
  r.weighted_f1 = weighted / static_cast<double>(r.total);
  r.accuracy = ratio(hits, r.total);
  r.binary_accuracy = ratio(binary_hits, r.total);
  return r;
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["weighted_f1"] = weighted_f1;
  j["accuracy"] = accuracy;
  j["binary_accuracy"] = binary_accuracy;
  j["n"] = total;
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    nlohmann::ordered_json row;
    row["class"] = c + 1;
    row["precision"] = per_class[c].precision;
    row["recall"] = per_class[c].recall;
    row["f1"] = per_class[c].f1;
    row["support"] = per_class[c].support;
    classes.push_back(std::move(row));
  }
  j["per_class"] = std::move(classes);
  j["confusion"] = confusion;
  return j;
}

}  // namespace slascore
