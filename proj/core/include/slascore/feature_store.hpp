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

#ifndef SLASCORE_FEATURE_STORE_HPP_
#define SLASCORE_FEATURE_STORE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "slascore/aux_scores.hpp"

namespace slascore {

// Utterance-level features in the form the classifier consumes.
struct UtteranceFeatures {
  std::string id;
  std::vector<double> v_enc;
  std::vector<double> v_dec;
  std::size_t n_chunks = 0;
  AuxScores aux;
};

// On-disk cache of extracted features:
//   <cache_dir>/<feature_key>/config.json
//   <cache_dir>/<feature_key>/<id>/{v_enc.tensor, v_dec.tensor, features.json}
// Records are written to a temporary directory and renamed into place.
class FeatureStore {
 public:
  FeatureStore(const std::filesystem::path& cache_dir, std::string feature_key);

  const std::filesystem::path& root() const { return root_; }
  const std::string& feature_key() const { return key_; }

  // True when a complete record exists whose stored entry hash matches.
  bool contains(std::string_view id, std::string_view entry_hash) const;

  void write(const UtteranceFeatures& features, std::string_view entry_hash) const;

  // Throws LookupError if the record is missing, IntegrityError if damaged.
  UtteranceFeatures read(std::string_view id) const;

  void write_config(const nlohmann::ordered_json& extraction_config) const;

 private:
  std::filesystem::path record_dir(std::string_view id) const;

  std::filesystem::path root_;
  std::string key_;
};

// Writes `j` pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j);

}  // namespace slascore

#endif  // SLASCORE_FEATURE_STORE_HPP_
