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

#ifndef SLASCORE_TESTS_SUPPORT_TEST_SUPPORT_HPP_
#define SLASCORE_TESTS_SUPPORT_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace slascore::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "slascore") {
    std::random_device rd;
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
      path_ = base / (tag + "-" + std::to_string(rd()) + std::to_string(rd()));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Relative path -> file bytes for every regular file below `root`.
inline std::vector<std::pair<std::string, std::string>> snapshot_tree(
    const std::filesystem::path& root) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      files.emplace_back(std::filesystem::relative(e.path(), root).generic_string(),
                         read_bytes(e.path()));
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Little-endian RIFF/WAVE writer for arbitrary headers, so tests can build
// files the library itself refuses to produce.
inline std::string make_wav_bytes(std::uint16_t format, std::uint16_t channels,
                                  std::uint32_t rate, std::uint16_t bits,
                                  const std::vector<std::int16_t>& samples) {
  auto u16 = [](std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v & 0xFF));
    s.push_back(static_cast<char>(v >> 8));
  };
  auto u32 = [](std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::string s = "RIFF";
  u32(s, 36 + data_bytes);
  s += "WAVEfmt ";
  u32(s, 16);
  u16(s, format);
  u16(s, channels);
  u32(s, rate);
  u32(s, rate * channels * bits / 8);
  u16(s, static_cast<std::uint16_t>(channels * bits / 8));
  u16(s, bits);
  s += "data";
  u32(s, data_bytes);
  for (auto v : samples) u16(s, static_cast<std::uint16_t>(v));
  return s;
}

}  // namespace slascore::testing

#endif  // SLASCORE_TESTS_SUPPORT_TEST_SUPPORT_HPP_
