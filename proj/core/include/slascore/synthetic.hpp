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

#ifndef SLASCORE_SYNTHETIC_HPP_
#define SLASCORE_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "slascore/manifest.hpp"

namespace slascore {

// A labelled toy corpus for exercising the pipeline end to end. Each
// utterance is broadband Gaussian noise whose level rises by level_step_db per
// proficiency class, so the class is recoverable from the log-Mel energy.
struct SyntheticCorpusOptions {
  std::size_t n_utterances = 64;
  std::uint64_t seed = 2024;
  double min_seconds = 31.0;
  double max_seconds = 60.0;
  double base_level_db = -54.0;  // RMS of class 1, dBFS
  double level_step_db = 10.0;
  double level_jitter_db = 2.0;
  double words_per_second = 2.0;
};

// Writes <dir>/wav/<id>.wav and <dir>/manifest.jsonl. Utterance i gets class
// 1 + i % 5; every fourth utterance goes to seen_test, the rest to train.
// Returns the entries with audio paths resolved against `dir`.
std::vector<ManifestEntry> make_synthetic_corpus(const std::filesystem::path& dir,
                                                 const SyntheticCorpusOptions& options = {});

}  // namespace slascore

#endif  // SLASCORE_SYNTHETIC_HPP_
