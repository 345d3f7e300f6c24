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

#include "slascore/audio.hpp"
#include "slascore/backend.hpp"
#include "slascore/logmel.hpp"
#include "slascore/pooling.hpp"

namespace slascore {
namespace {

AudioSignal noise_seconds(double seconds) {
  std::mt19937 rng(1);
  std::normal_distribution<float> g(0.0f, 0.1f);
  AudioSignal s;
  s.samples.resize(static_cast<std::size_t>(seconds * kPipelineSampleRate));
  for (float& v : s.samples) v = g(rng);
  return s;
}

void BM_Segment85s(benchmark::State& state) {
  const auto audio = noise_seconds(85.0);
  const SegmentationConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(segment(audio, cfg));
}
BENCHMARK(BM_Segment85s)->Unit(benchmark::kMillisecond);

void BM_LogMel30s(benchmark::State& state) {
  const auto audio = noise_seconds(30.0);
  const LogMelFrontend frontend;
  for (auto _ : state) benchmark::DoNotOptimize(frontend.compute(audio.samples));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(audio.size()));
}
BENCHMARK(BM_LogMel30s)->Unit(benchmark::kMillisecond);

void BM_AcousticUtterance85s(benchmark::State& state) {
  const auto chunks = segment(noise_seconds(85.0), SegmentationConfig{});
  const LogMelFrontend frontend;
  const MockBackend mock;
  for (auto _ : state) benchmark::DoNotOptimize(utterance_acoustic("u", chunks, frontend, mock));
}
BENCHMARK(BM_AcousticUtterance85s)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace slascore
