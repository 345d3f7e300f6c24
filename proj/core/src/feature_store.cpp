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

#include "slascore/feature_store.hpp"

#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include "slascore/error.hpp"
#include "slascore/hash.hpp"
#include "slascore/tensor_io.hpp"

namespace slascore {

namespace {

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("missing " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(path.string() + " is not valid JSON: " + e.what());
  }
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("short write to " + path.string());
}

FeatureStore::FeatureStore(const std::filesystem::path& cache_dir, std::string feature_key)
    : root_(cache_dir / feature_key), key_(std::move(feature_key)) {}

std::filesystem::path FeatureStore::record_dir(std::string_view id) const {
  return root_ / std::string(id);
}

bool FeatureStore::contains(std::string_view id, std::string_view entry_hash) const {
  const auto dir = record_dir(id);
  if (!std::filesystem::exists(dir / "features.json") ||
      !std::filesystem::exists(dir / "v_enc.tensor") ||
      !std::filesystem::exists(dir / "v_dec.tensor")) {
    return false;
  }
  try {
    const auto meta = read_json_file(dir / "features.json");
    return meta.value("entry_hash", std::string()) == entry_hash;
  } catch (const Error&) {
    return false;
  }
}

void FeatureStore::write(const UtteranceFeatures& f, std::string_view entry_hash) const {
  std::filesystem::create_directories(root_);
  const auto final_dir = record_dir(f.id);
  std::ostringstream suffix;
  suffix << ".tmp-" << f.id << '-' << std::this_thread::get_id();
  const auto tmp_dir = root_ / suffix.str();
  std::filesystem::remove_all(tmp_dir);
  std::filesystem::create_directories(tmp_dir);

  write_tensor(tmp_dir / "v_enc.tensor", tensor_from_vector("v_enc", f.v_enc));
  write_tensor(tmp_dir / "v_dec.tensor", tensor_from_vector("v_dec", f.v_dec));
  nlohmann::ordered_json meta;
  meta["id"] = f.id;
  meta["n_chunks"] = f.n_chunks;
  meta["hidden_dim"] = f.v_enc.size();
  meta["sts_score"] = optional_number(f.aux.sts);
  meta["itc_score"] = optional_number(f.aux.itc);
  meta["entry_hash"] = std::string(entry_hash);
  write_json_file(tmp_dir / "features.json", meta);

  std::filesystem::remove_all(final_dir);
  std::error_code ec;
  std::filesystem::rename(tmp_dir, final_dir, ec);
  if (ec) throw IoError("cannot move feature record into " + final_dir.string() + ": " + ec.message());
}

UtteranceFeatures FeatureStore::read(std::string_view id) const {
  const auto dir = record_dir(id);
  if (!std::filesystem::exists(dir / "features.json")) {
    throw LookupError("no extracted features for " + std::string(id) + " in " + root_.string() +
                      " (run extract first)");
  }
  const auto meta = read_json_file(dir / "features.json");
  UtteranceFeatures f;
  f.id = std::string(id);
  try {
    f.n_chunks = meta.at("n_chunks").get<std::size_t>();
    if (const auto& s = meta.at("sts_score"); !s.is_null()) f.aux.sts = s.get<double>();
    if (const auto& s = meta.at("itc_score"); !s.is_null()) f.aux.itc = s.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError((dir / "features.json").string() + ": " + e.what());
  }
  f.v_enc = vector_from_tensor(read_tensor(dir / "v_enc.tensor"));
  f.v_dec = vector_from_tensor(read_tensor(dir / "v_dec.tensor"));
  return f;
}

void FeatureStore::write_config(const nlohmann::ordered_json& extraction_config) const {
  std::filesystem::create_directories(root_);
  write_json_file(root_ / "config.json", extraction_config);
}

}  // namespace slascore
