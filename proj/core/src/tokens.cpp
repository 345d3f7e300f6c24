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

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "slascore/error.hpp"
#include "slascore/tokens.hpp"

namespace slascore {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

std::string chunk_file_name(std::size_t index) {
  std::ostringstream os;
  os << "chunk_";
  os.width(3);
  os.fill('0');
  os << index << ".txt";
  return os.str();
}

}  // namespace

TokenSequence PrefixSpec::tokens() const {
  return {{start_token, language_token, task_token, no_timestamps_token},
          TokenProvenance::prefix,
          4};
}

TokenSequence build_decoder_input(const PrefixSpec& prefix, const TokenSequence& transcript) {
  TokenSequence z = prefix.tokens();
  z.ids.insert(z.ids.end(), transcript.ids.begin(), transcript.ids.end());
  z.provenance = TokenProvenance::combined;
  z.prefix_length = prefix.tokens().size();
  return z;
}

TokenSequence ByteTokenizer::encode(std::string_view text) const {
  TokenSequence seq;
  seq.ids.reserve(text.size());
  for (char c : text) seq.ids.push_back(static_cast<unsigned char>(c));
  return seq;
}

std::string ByteTokenizer::decode(std::span<const TokenId> ids) const {
  std::string out;
  out.reserve(ids.size());
  for (TokenId id : ids) {
    if (id < 0 || id > 255) {
      throw DataError("byte tokenizer cannot decode id " + std::to_string(id));
    }
    out.push_back(static_cast<char>(id));
  }
  return out;
}

std::unique_ptr<Tokenizer> make_tokenizer(const TokenizerConfig& config) {
  if (config.type == "byte") return std::make_unique<ByteTokenizer>();
  if (config.type == "bpe") {
    return std::make_unique<BpeTokenizer>(BpeTokenizer::load(config.vocab, config.merges));
  }
  throw ConfigError("unknown tokenizer type \"" + config.type + "\" (expected byte or bpe)");
}

void MapTranscriptProvider::add(std::string utterance_id, UtteranceTranscript transcript) {
  entries_.insert_or_assign(std::move(utterance_id), std::move(transcript));
}

UtteranceTranscript MapTranscriptProvider::lookup(std::string_view utterance_id) const {
  const auto it = entries_.find(utterance_id);
  if (it == entries_.end()) {
    throw LookupError("no transcript for utterance " + std::string(utterance_id));
  }
  return it->second;
}

UtteranceTranscript DirectoryTranscriptProvider::lookup(std::string_view utterance_id) const {
  const auto dir = root_ / std::string(utterance_id);
  UtteranceTranscript t;
  for (std::size_t i = 1;; ++i) {
    const auto path = dir / chunk_file_name(i);
    if (!std::filesystem::exists(path)) break;
    t.per_chunk.push_back(read_text(path));
  }
  if (t.per_chunk.empty()) {
    const auto whole = dir / "transcript.txt";
    if (!std::filesystem::exists(whole)) {
      throw LookupError("no transcript files for utterance " + std::string(utterance_id) +
                        " under " + dir.string());
    }
    t.whole = read_text(whole);
  }
  return t;
}

std::vector<double> chunk_duration_shares(std::size_t n_chunks, const SegmentationConfig& cfg) {
  cfg.validate();
  std::vector<double> shares(n_chunks);
  const double half_overlap = static_cast<double>(cfg.overlap()) / 2.0;
  for (std::size_t i = 0; i < n_chunks; ++i) {
    double span = static_cast<double>(cfg.chunk_len);
    if (i > 0) span -= half_overlap;
    if (i + 1 < n_chunks) span -= half_overlap;
    shares[i] = span;
  }
  return shares;
}

std::vector<std::string> split_words_proportionally(std::string_view text,
                                                    std::span<const double> shares) {
  std::vector<std::string> words;
  {
    std::istringstream is{std::string(text)};
    std::string w;
    while (is >> w) words.push_back(std::move(w));
  }
  double total = 0.0;
  for (double s : shares) {
    if (!(s >= 0.0)) throw DataError("chunk shares must be non-negative");
    total += s;
  }
  std::vector<std::string> out(shares.size());
  if (shares.empty()) return out;
  if (!(total > 0.0)) throw DataError("chunk shares sum to zero");

  const double n_words = static_cast<double>(words.size());
  double cumulative = 0.0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    cumulative += shares[i];
    std::size_t end = (i + 1 == shares.size())
                          ? words.size()
                          : static_cast<std::size_t>(std::llround(n_words * cumulative / total));
    end = std::max(end, begin);
    for (std::size_t w = begin; w < end; ++w) {
      if (w > begin) out[i] += ' ';
      out[i] += words[w];
    }
    begin = end;
  }
  return out;
}

std::vector<std::string> chunk_transcripts(const TranscriptProvider& provider,
                                           std::string_view utterance_id,
                                           std::size_t n_chunks,
                                           const SegmentationConfig& cfg) {
  UtteranceTranscript t = provider.lookup(utterance_id);
  if (t.per_chunk.size() == n_chunks && n_chunks > 0) return t.per_chunk;

  std::optional<std::string> whole = t.whole;
  if (!whole && t.per_chunk.size() == 1) whole = t.per_chunk.front();
  if (!whole) {
    if (t.per_chunk.empty()) {
      throw LookupError("utterance " + std::string(utterance_id) + " has no transcript text");
    }
    throw DataError("utterance " + std::string(utterance_id) + " has " +
                    std::to_string(t.per_chunk.size()) + " chunk transcripts but " +
                    std::to_string(n_chunks) + " chunks");
  }
  if (n_chunks == 1) return {*whole};
  const auto shares = chunk_duration_shares(n_chunks, cfg);
  return split_words_proportionally(*whole, shares);
}

}  // namespace slascore
