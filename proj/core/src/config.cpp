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

#include "slascore/config.hpp"

#include <fstream>

#include "slascore/error.hpp"
#include "slascore/hash.hpp"

namespace slascore {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

SegmentationConfig RunConfig::segmentation() const {
  return SegmentationConfig::from_seconds(chunk_seconds, stride_seconds, frontend.sample_rate,
                                          pad_short);
}

nlohmann::ordered_json RunConfig::extraction_json() const {
  nlohmann::ordered_json j;
  const SegmentationConfig seg = segmentation();
  j["segmentation"] = {{"chunk_len", seg.chunk_len},
                       {"stride", seg.stride},
                       {"pad_short", seg.pad_short}};
  j["frontend"] = {{"sample_rate", frontend.sample_rate},
                   {"n_fft", frontend.n_fft},
                   {"hop", frontend.hop},
                   {"n_mels", frontend.n_mels}};
  j["backend"] = backend;
  nlohmann::ordered_json tok;
  tok["type"] = tokenizer.type;
  if (tokenizer.type == "bpe") {
    // Asset contents rather than paths, so relocating assets keeps the cache.
    tok["vocab"] = to_hex(hash_file(tokenizer.vocab));
    tok["merges"] = to_hex(hash_file(tokenizer.merges));
  }
  j["tokenizer"] = tok;
  j["prefix"] = {prefix.start_token, prefix.language_token, prefix.task_token,
                 prefix.no_timestamps_token};
  j["pooling"] = {{"exclude_prefix", pooling.exclude_prefix}};
  return j;
}

std::string RunConfig::feature_key() const {
  return Fnv1a64().update(extraction_json().dump()).hex();
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["segmentation"] = {{"chunk_seconds", chunk_seconds},
                       {"stride_seconds", stride_seconds},
                       {"pad_short", pad_short}};
  j["frontend"] = {{"n_fft", frontend.n_fft}, {"hop", frontend.hop}, {"n_mels", frontend.n_mels}};
  j["backend"] = backend;
  nlohmann::ordered_json tok;
  tok["type"] = tokenizer.type;
  if (tokenizer.type == "bpe") {
    tok["vocab"] = tokenizer.vocab.generic_string();
    tok["merges"] = tokenizer.merges.generic_string();
  }
  j["tokenizer"] = tok;
  j["prefix"] = {{"start_token", prefix.start_token},
                 {"language_token", prefix.language_token},
                 {"task_token", prefix.task_token},
                 {"no_timestamps_token", prefix.no_timestamps_token}};
  j["pooling"] = {{"exclude_prefix", pooling.exclude_prefix}};
  j["train"] = nlohmann::json(train);
  j["features"] = nlohmann::json(features);
  j["cache_dir"] = cache_dir.generic_string();
  j["output_dir"] = output_dir.generic_string();
  j["jobs"] = jobs;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("run configuration must be a JSON object");
  RunConfig c;
  try {
    if (const auto it = j.find("segmentation"); it != j.end()) {
      c.chunk_seconds = it->value("chunk_seconds", c.chunk_seconds);
      c.stride_seconds = it->value("stride_seconds", c.stride_seconds);
      c.pad_short = it->value("pad_short", c.pad_short);
    }
    if (const auto it = j.find("frontend"); it != j.end()) {
      c.frontend.n_fft = it->value("n_fft", c.frontend.n_fft);
      c.frontend.hop = it->value("hop", c.frontend.hop);
      c.frontend.n_mels = it->value("n_mels", c.frontend.n_mels);
    }
    c.backend = j.value("backend", c.backend);
    if (c.backend.starts_with("files:")) {
      c.backend = "files:" + resolve(base_dir, c.backend.substr(6)).generic_string();
    }
    if (const auto it = j.find("tokenizer"); it != j.end()) {
      c.tokenizer.type = it->value("type", c.tokenizer.type);
      c.tokenizer.vocab = resolve(base_dir, it->value("vocab", std::string()));
      c.tokenizer.merges = resolve(base_dir, it->value("merges", std::string()));
    }
    if (const auto it = j.find("prefix"); it != j.end()) {
      c.prefix.start_token = it->value("start_token", c.prefix.start_token);
      c.prefix.language_token = it->value("language_token", c.prefix.language_token);
      c.prefix.task_token = it->value("task_token", c.prefix.task_token);
      c.prefix.no_timestamps_token = it->value("no_timestamps_token", c.prefix.no_timestamps_token);
    }
    if (const auto it = j.find("pooling"); it != j.end()) {
      c.pooling.exclude_prefix = it->value("exclude_prefix", c.pooling.exclude_prefix);
    }
    if (const auto it = j.find("train"); it != j.end()) c.train = it->get<TrainConfig>();
    if (const auto it = j.find("features"); it != j.end()) c.features = it->get<FeatureFlags>();
    c.cache_dir = resolve(base_dir, j.value("cache_dir", c.cache_dir.generic_string()));
    c.output_dir = resolve(base_dir, j.value("output_dir", c.output_dir.generic_string()));
    c.jobs = j.value("jobs", c.jobs);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid run configuration: ") + e.what());
  }
  if (c.tokenizer.type != "byte" && c.tokenizer.type != "bpe") {
    throw ConfigError("unknown tokenizer type \"" + c.tokenizer.type + "\"");
  }
  if (c.tokenizer.type == "bpe" && (c.tokenizer.vocab.empty() || c.tokenizer.merges.empty())) {
    throw ConfigError("bpe tokenizer needs both \"vocab\" and \"merges\" paths");
  }
  if (c.jobs < 1) c.jobs = 1;
  c.segmentation();  // validates durations
  c.train.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("configuration " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, path.parent_path());
}

}  // namespace slascore
