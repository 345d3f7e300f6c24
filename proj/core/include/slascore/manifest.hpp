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

#ifndef SLASCORE_MANIFEST_HPP_
#define SLASCORE_MANIFEST_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace slascore {

enum class Split { train, dev, seen_test, unseen_test };

std::string to_string(Split split);
// Throws DataError for an unknown name.
Split split_from_string(std::string_view name);

// One line of a JSON Lines manifest:
//   {"id": "u001", "audio": "wav/u001.wav", "raw_score": 3.5, "split": "train",
//    "transcript": "..." | ["chunk 1 text", "chunk 2 text"],
//    "prompt_text": "...", "sts_score": 0.41, "itc_score": 0.27}
// transcript, prompt_text, sts_score and itc_score are optional.
struct ManifestEntry {
  std::string id;
  std::filesystem::path audio;
  std::optional<std::string> transcript;        // whole-response text
  std::vector<std::string> chunk_transcripts;   // one text per chunk
  std::optional<std::string> prompt_text;
  std::optional<double> sts_score;
  std::optional<double> itc_score;
  double raw_score = 1.0;
  Split split = Split::train;

  bool has_transcript() const { return transcript.has_value() || !chunk_transcripts.empty(); }
};

// Ids become directory names, so they are limited to [A-Za-z0-9._-] and may
// not start with a dot.
bool is_valid_utterance_id(std::string_view id);

ManifestEntry entry_from_json(const nlohmann::json& j);
nlohmann::ordered_json entry_to_json(const ManifestEntry& entry);

// Reads a manifest; relative audio paths resolve against the manifest's
// directory. Throws IoError if unreadable, DataError (with the line number)
// for malformed lines, duplicate ids, scores outside [1, 5] or bad splits.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

}  // namespace slascore

#endif  // SLASCORE_MANIFEST_HPP_
