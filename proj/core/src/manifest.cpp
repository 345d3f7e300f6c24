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

#include "slascore/manifest.hpp"

#include <fstream>
#include <iomanip>
#include <iterator>
#include <set>
#include <sstream>

#include "slascore/error.hpp"
#include "slascore/hash.hpp"
#include "slascore/metrics.hpp"

namespace slascore {

std::string Fnv1a64::hex() const { return to_hex(state_); }

std::string to_hex(std::uint64_t value) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << value;
  return os.str();
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  Fnv1a64 h;
  char buffer[1 << 16];
  while (in) {
    in.read(buffer, sizeof buffer);
    h.update(std::string_view(buffer, static_cast<std::size_t>(in.gcount())));
  }
  return h.value();
}

std::string to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::seen_test: return "seen_test";
    case Split::unseen_test: return "unseen_test";
  }
  return "train";
}

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "dev") return Split::dev;
  if (name == "seen_test") return Split::seen_test;
  if (name == "unseen_test") return Split::unseen_test;
  throw DataError("unknown split \"" + std::string(name) +
                  "\" (expected train, dev, seen_test or unseen_test)");
}

bool is_valid_utterance_id(std::string_view id) {
  if (id.empty() || id.front() == '.') return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

ManifestEntry entry_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("manifest line is not a JSON object");
  ManifestEntry e;
  try {
    e.id = j.at("id").get<std::string>();
    e.audio = j.at("audio").get<std::string>();
    e.raw_score = j.at("raw_score").get<double>();
    e.split = split_from_string(j.at("split").get<std::string>());
    if (const auto it = j.find("transcript"); it != j.end() && !it->is_null()) {
      if (it->is_string()) {
        e.transcript = it->get<std::string>();
      } else {
        e.chunk_transcripts = it->get<std::vector<std::string>>();
      }
    }
    if (const auto it = j.find("prompt_text"); it != j.end() && !it->is_null()) {
      e.prompt_text = it->get<std::string>();
    }
    if (const auto it = j.find("sts_score"); it != j.end() && !it->is_null()) {
      e.sts_score = it->get<double>();
    }
    if (const auto it = j.find("itc_score"); it != j.end() && !it->is_null()) {
      e.itc_score = it->get<double>();
    }
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("malformed manifest entry: ") + ex.what());
  }
  if (!is_valid_utterance_id(e.id)) throw DataError("invalid utterance id \"" + e.id + "\"");
  discretize(e.raw_score);  // range check
  return e;
}

nlohmann::ordered_json entry_to_json(const ManifestEntry& e) {
  nlohmann::ordered_json j;
  j["id"] = e.id;
  j["audio"] = e.audio.generic_string();
  if (e.transcript) {
    j["transcript"] = *e.transcript;
  } else if (!e.chunk_transcripts.empty()) {
    j["transcript"] = e.chunk_transcripts;
  }
  if (e.prompt_text) j["prompt_text"] = *e.prompt_text;
  if (e.sts_score) j["sts_score"] = *e.sts_score;
  if (e.itc_score) j["itc_score"] = *e.itc_score;
  j["raw_score"] = e.raw_score;
  j["split"] = to_string(e.split);
  return j;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest " + path.string());
  const auto base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::set<std::string, std::less<>> seen;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    ManifestEntry e;
    try {
      e = entry_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& ex) {
      throw DataError(where + "invalid JSON: " + ex.what());
    } catch (const DataError& ex) {
      throw DataError(where + ex.what());
    }
    if (!seen.insert(e.id).second) throw DataError(where + "duplicate id \"" + e.id + "\"");
    if (e.audio.is_relative()) e.audio = base / e.audio;
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  for (const auto& e : entries) out << entry_to_json(e).dump() << '\n';
}

}  // namespace slascore
