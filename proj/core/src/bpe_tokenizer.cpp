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

#include <array>
#include <fstream>
#include <iterator>
#include <limits>

#include <nlohmann/json.hpp>

#include "slascore/error.hpp"
#include "slascore/tokens.hpp"

namespace slascore {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t begin;
  std::size_t length;
};

std::vector<CodePoint> decode_utf8(std::string_view s) {
  std::vector<CodePoint> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = b0;
    if (b0 >= 0xC0 && b0 < 0xE0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if (b0 >= 0xE0 && b0 < 0xF0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xF0 && b0 < 0xF8) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool valid = len == 1 ? b0 < 0x80 : i + len <= s.size();
    for (std::size_t k = 1; valid && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        valid = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!valid) {
      // Stray byte: keep it as its own unit.
      len = 1;
      cp = 0xFFFD;
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t c) {
  return c == U' ' || (c >= U'\t' && c <= U'\r') || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_letter(char32_t c) {
  if (c < 0x80) return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
  if (is_space(c)) return false;
  if (c >= 0xA1 && c <= 0xBF) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x206F) return false;  // general punctuation
  if (c == 0xFFFD) return false;
  return true;
}

enum class CharClass { letter, digit, space, other };

CharClass classify(char32_t c) {
  if (is_space(c)) return CharClass::space;
  if (is_letter(c)) return CharClass::letter;
  if (is_digit(c)) return CharClass::digit;
  return CharClass::other;
}

// GPT-2 reversible byte -> printable code point table.
const std::array<char32_t, 256>& byte_to_unicode() {
  static const std::array<char32_t, 256> table = [] {
    std::array<char32_t, 256> t{};
    std::array<bool, 256> direct{};
    for (int b = '!'; b <= '~'; ++b) direct[b] = true;
    for (int b = 0xA1; b <= 0xAC; ++b) direct[b] = true;
    for (int b = 0xAE; b <= 0xFF; ++b) direct[b] = true;
    char32_t next = 256;
    for (int b = 0; b < 256; ++b) t[b] = direct[b] ? static_cast<char32_t>(b) : next++;
    return t;
  }();
  return table;
}

std::map<char32_t, unsigned char> unicode_to_byte() {
  std::map<char32_t, unsigned char> m;
  const auto& t = byte_to_unicode();
  for (int b = 0; b < 256; ++b) m[t[b]] = static_cast<unsigned char>(b);
  return m;
}

}  // namespace

std::vector<std::string> pretokenize(std::string_view text) {
  const auto cps = decode_utf8(text);
  const std::size_t n = cps.size();
  std::vector<std::string> pieces;
  auto emit = [&](std::size_t from, std::size_t to) {
    const std::size_t b = cps[from].begin;
    const std::size_t e = cps[to - 1].begin + cps[to - 1].length;
    pieces.emplace_back(text.substr(b, e - b));
  };
  auto run_end = [&](std::size_t from, CharClass cls) {
    std::size_t j = from;
    while (j < n && classify(cps[j].value) == cls) ++j;
    return j;
  };

  std::size_t i = 0;
  while (i < n) {
    const char32_t c = cps[i].value;

    if (c == U'\'' && i + 1 < n) {
      const char32_t c1 = cps[i + 1].value;
      const char32_t c2 = i + 2 < n ? cps[i + 2].value : 0;
      std::size_t len = 0;
      if (c1 == U's' || c1 == U't' || c1 == U'm' || c1 == U'd') {
        len = 2;
      } else if ((c1 == U'r' && c2 == U'e') || (c1 == U'v' && c2 == U'e') ||
                 (c1 == U'l' && c2 == U'l')) {
        len = 3;
      }
      if (len > 0) {
        emit(i, i + len);
        i += len;
        continue;
      }
    }

    std::size_t start = i;
    std::size_t body = i;
    if (c == U' ' && i + 1 < n && classify(cps[i + 1].value) != CharClass::space) body = i + 1;
    const CharClass cls = classify(cps[body].value);
    if (cls != CharClass::space) {
      const std::size_t end = run_end(body, cls);
      emit(start, end);
      i = end;
      continue;
    }

    // Whitespace run. If a non-space follows, the last whitespace character is
    // left for the next piece unless the run is a single character.
    const std::size_t end = run_end(i, CharClass::space);
    if (end == n || end - i == 1) {
      emit(i, end);
      i = end;
    } else {
      emit(i, end - 1);
      i = end - 1;
    }
  }
  return pieces;
}

BpeTokenizer BpeTokenizer::load(const std::filesystem::path& vocab_json,
                                const std::filesystem::path& merges_txt) {
  BpeTokenizer tok;
  {
    std::ifstream in(vocab_json);
    if (!in) throw ConfigError("cannot open tokenizer vocabulary " + vocab_json.string());
    nlohmann::json vocab;
    try {
      in >> vocab;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("tokenizer vocabulary " + vocab_json.string() + " is not JSON: " +
                        e.what());
    }
    if (!vocab.is_object()) throw ConfigError("tokenizer vocabulary must be a JSON object");
    for (const auto& [token, id] : vocab.items()) {
      if (!id.is_number_integer()) throw ConfigError("vocabulary ids must be integers");
      const auto value = id.get<TokenId>();
      tok.vocab_.emplace(token, value);
      tok.inverse_.emplace(value, token);
    }
  }
  {
    std::ifstream in(merges_txt);
    if (!in) throw ConfigError("cannot open tokenizer merges " + merges_txt.string());
    std::string line;
    std::size_t rank = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.starts_with("#version")) continue;
      const auto space = line.find(' ');
      if (space == std::string::npos || space == 0 || space + 1 == line.size()) {
        throw ConfigError("malformed merge rule \"" + line + "\" in " + merges_txt.string());
      }
      tok.merge_ranks_.emplace(std::pair{line.substr(0, space), line.substr(space + 1)},
                               rank++);
    }
  }
  return tok;
}

std::vector<std::string> BpeTokenizer::bpe(const std::string& word) const {
  std::vector<std::string> symbols;
  for (const auto& cp : decode_utf8(word)) symbols.emplace_back(word.substr(cp.begin, cp.length));

  while (symbols.size() > 1) {
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    std::size_t best_at = 0;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      const auto it = merge_ranks_.find(std::pair{symbols[i], symbols[i + 1]});
      if (it != merge_ranks_.end() && it->second < best_rank) {
        best_rank = it->second;
        best_at = i;
      }
    }
    if (best_rank == std::numeric_limits<std::size_t>::max()) break;

    const std::string left = symbols[best_at];
    const std::string right = symbols[best_at + 1];
    std::vector<std::string> merged;
    merged.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size();) {
      if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
        merged.push_back(left + right);
        i += 2;
      } else {
        merged.push_back(symbols[i]);
        ++i;
      }
    }
    symbols = std::move(merged);
  }
  return symbols;
}

TokenSequence BpeTokenizer::encode(std::string_view text) const {
  const auto& table = byte_to_unicode();
  TokenSequence seq;
  for (const auto& piece : pretokenize(text)) {
    std::string mapped;
    for (char ch : piece) append_utf8(mapped, table[static_cast<unsigned char>(ch)]);
    for (const auto& symbol : bpe(mapped)) {
      const auto it = vocab_.find(symbol);
      if (it == vocab_.end()) {
        throw ConfigError("tokenizer vocabulary has no entry for symbol \"" + symbol + "\"");
      }
      seq.ids.push_back(it->second);
    }
  }
  return seq;
}

std::string BpeTokenizer::decode(std::span<const TokenId> ids) const {
  static const auto reverse = unicode_to_byte();
  std::string out;
  for (TokenId id : ids) {
    const auto it = inverse_.find(id);
    if (it == inverse_.end()) throw DataError("unknown token id " + std::to_string(id));
    for (const auto& cp : decode_utf8(it->second)) {
      const auto b = reverse.find(cp.value);
      if (b == reverse.end()) throw DataError("token " + std::to_string(id) + " is not byte-level");
      out.push_back(static_cast<char>(b->second));
    }
  }
  return out;
}

}  // namespace slascore
