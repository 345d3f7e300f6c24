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


#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "slascore/classifier.hpp"
#include "slascore/metrics.hpp"

namespace slascore {
namespace {

std::vector<Example> random_examples(std::size_t n, std::size_t input_dim, std::size_t n_aux) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<Example> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].input.resize(input_dim);
    for (double& v : out[i].input) v = g(rng);
    out[i].aux.assign(n_aux, 0.5);
    out[i].label = 1 + static_cast<int>(i % 5);
  }
  return out;
}

// One micro-batch at the default width: 32 inputs, 512 hidden, both scores.
void BM_LossAndGrad(benchmark::State& state) {
  const auto batch = random_examples(static_cast<std::size_t>(state.range(0)), 32, 2);
  const auto params = init_params({32, kBottleneckDim, 2, kNumClasses}, ProjectionActivation::gelu, 1);
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_grad(batch, params));
}
BENCHMARK(BM_LossAndGrad)->Arg(1)->Arg(4)->Arg(16);

void BM_Train100Steps(benchmark::State& state) {
  const auto data = random_examples(48, 32, 2);
  TrainConfig cfg;
  cfg.steps = 100;
  for (auto _ : state) benchmark::DoNotOptimize(train(data, cfg));
}
BENCHMARK(BM_Train100Steps)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(5);
  std::vector<int> pred(n), lab(n);
  for (std::size_t i = 0; i < n; ++i) {
    pred[i] = 1 + static_cast<int>(rng() % 5);
    lab[i] = 1 + static_cast<int>(rng() % 5);
  }
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(pred, lab));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Evaluate)->Arg(1000)->Arg(100000);

}  // namespace
}  // namespace slascore
