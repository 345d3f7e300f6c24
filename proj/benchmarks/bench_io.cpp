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

#include <string>

#include "slascore/tensor_io.hpp"

namespace slascore {
namespace {

Tensor encoder_sized() {
  Tensor t{"chunk_001.enc", {1500, 1280}, {}};
  t.data.resize(t.element_count());
  for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = static_cast<float>(i % 977) * 1e-3f;
  return t;
}

void BM_EncodeTensor(benchmark::State& state) {
  const auto t = encoder_sized();
  for (auto _ : state) benchmark::DoNotOptimize(encode_tensor(t));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(4 * t.data.size()));
}
BENCHMARK(BM_EncodeTensor)->Unit(benchmark::kMillisecond);

void BM_DecodeTensor(benchmark::State& state) {
  const std::string bytes = encode_tensor(encoder_sized());
  for (auto _ : state) benchmark::DoNotOptimize(decode_tensor(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_DecodeTensor)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace slascore
