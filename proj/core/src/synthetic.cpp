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

#include "slascore/synthetic.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "slascore/audio.hpp"
#include "slascore/error.hpp"
#include "slascore/rng.hpp"

namespace slascore {
namespace {

constexpr std::array<const char*, 24> kLexicon = {
    "the",    "city",   "river", "people", "market", "morning", "school",  "picture",
    "during", "family", "green", "bridge", "window", "because", "travel",  "weather",
    "think",  "people", "small", "garden", "friend", "evening", "student", "library"};

// Box-Muller; the second variate is discarded to keep the stream simple.
double gaussian(SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::vector<ManifestEntry> make_synthetic_corpus(const std::filesystem::path& dir,
                                                 const SyntheticCorpusOptions& options) {
  if (options.n_utterances == 0) throw ConfigError("n_utterances must be positive");
  if (!(options.min_seconds > 0.0) || options.max_seconds < options.min_seconds) {
    throw ConfigError("invalid duration range");
  }
  std::filesystem::create_directories(dir / "wav");
  SplitMix64 rng(options.seed);

  std::vector<ManifestEntry> relative;
  std::vector<ManifestEntry> resolved;
  for (std::size_t i = 0; i < options.n_utterances; ++i) {
    const int cls = 1 + static_cast<int>(i % 5);
    char id[16];
    std::snprintf(id, sizeof id, "u%03zu", i);

    const double seconds = rng.uniform(options.min_seconds, options.max_seconds);
    const double level_db = options.base_level_db + options.level_step_db * (cls - 1) +
                            rng.uniform(-options.level_jitter_db, options.level_jitter_db);
    const double rms = std::pow(10.0, level_db / 20.0);

    AudioSignal signal;
    signal.samples.resize(static_cast<std::size_t>(seconds * kPipelineSampleRate));
    for (float& s : signal.samples) s = static_cast<float>(rms * gaussian(rng));

    const auto n_words = static_cast<std::size_t>(std::lround(seconds * options.words_per_second));
    std::string text;
    for (std::size_t w = 0; w < n_words; ++w) {
      if (w) text += ' ';
      text += kLexicon[rng.below(kLexicon.size())];
    }

    ManifestEntry e;
    e.id = id;
    e.audio = std::filesystem::path("wav") / (e.id + ".wav");
    e.transcript = std::move(text);
    e.sts_score = rng.uniform(0.0, 1.0);
    e.itc_score = rng.uniform(-0.2, 0.6);
    e.raw_score = cls == 5 ? 5.0 : cls + 0.9 * rng.uniform01();
    e.split = i % 4 == 3 ? Split::seen_test : Split::train;

    write_wav(dir / e.audio, signal);
    relative.push_back(e);
    e.audio = dir / e.audio;
    resolved.push_back(std::move(e));
  }
  write_manifest(dir / "manifest.jsonl", relative);
  return resolved;
}

}  // namespace slascore
