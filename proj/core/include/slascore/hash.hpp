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

#ifndef SLASCORE_HASH_HPP_
#define SLASCORE_HASH_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace slascore {

// 64-bit FNV-1a, used for cache keys (not for security).
class Fnv1a64 {
 public:
  Fnv1a64& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001B3ULL;
    }
    return *this;
  }
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xCBF29CE484222325ULL;
};

// FNV-1a of a file's bytes. Throws IoError if unreadable.
std::uint64_t hash_file(const std::filesystem::path& path);

std::string to_hex(std::uint64_t value);

}  // namespace slascore

#endif  // SLASCORE_HASH_HPP_
