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

#ifndef SLASCORE_CONFIG_HPP_
#define SLASCORE_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "slascore/audio.hpp"
#include "slascore/classifier.hpp"
#include "slascore/logmel.hpp"
#include "slascore/pooling.hpp"
#include "slascore/tokens.hpp"

namespace slascore {

// Everything a run needs, loaded from one JSON document. Omitted fields keep
// the defaults below (30 s windows with 5 s overlap, 80-bin front end, mock
// backend, byte tokenizer, 1000 Adam steps at 7.5e-4 with batch 4 and
// two-step accumulation).
//
//   {
//     "segmentation": {"chunk_seconds": 30, "stride_seconds": 25, "pad_short": true},
//     "frontend": {"n_fft": 400, "hop": 160, "n_mels": 80},
//     "backend": "mock" | "files:<dir>",
//     "tokenizer": {"type": "byte"} | {"type": "bpe", "vocab": "...", "merges": "..."},
//     "prefix": {"start_token": 50258, "language_token": 50259,
//                "task_token": 50359, "no_timestamps_token": 50363},
//     "pooling": {"exclude_prefix": false},
//     "train": {"steps": 1000, "learning_rate": 7.5e-4, "batch_size": 4,
//               "grad_accum": 2, "seed": 42, "hidden_dim": 512,
//               "projection_activation": "gelu",
//               "adam": {"beta1": 0.9, "beta2": 0.999, "epsilon": 1e-8}},
//     "features": {"acoustic": true, "linguistic": true, "sts": true, "itc": true},
//     "cache_dir": "cache", "output_dir": "out", "jobs": 1
//   }
struct RunConfig {
  double chunk_seconds = 30.0;
  double stride_seconds = 25.0;
  bool pad_short = true;
  FrontendConfig frontend;
  std::string backend = "mock";
  TokenizerConfig tokenizer;
  PrefixSpec prefix;
  PoolingOptions pooling;
  TrainConfig train;
  FeatureFlags features;
  std::filesystem::path cache_dir = "cache";
  std::filesystem::path output_dir = "out";
  std::size_t jobs = 1;

  SegmentationConfig segmentation() const;

  // Identifies the feature store: a hash over every setting that changes
  // extracted features (segmentation, front end, backend, tokenizer, prefix,
  // pooling). Training settings and paths do not enter it.
  std::string feature_key() const;
  nlohmann::ordered_json extraction_json() const;

  nlohmann::ordered_json to_json() const;

  // Relative paths resolve against `base_dir`. Throws ConfigError.
  static RunConfig from_json(const nlohmann::json& j,
                             const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);
};

}  // namespace slascore

#endif  // SLASCORE_CONFIG_HPP_
