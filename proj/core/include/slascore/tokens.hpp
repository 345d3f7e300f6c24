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

#ifndef SLASCORE_TOKENS_HPP_
#define SLASCORE_TOKENS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slascore/audio.hpp"

namespace slascore {

using TokenId = std::int32_t;

enum class TokenProvenance { prefix, transcript, combined };

struct TokenSequence {
  std::vector<TokenId> ids;
  TokenProvenance provenance = TokenProvenance::transcript;
  // For combined sequences: ids[0, prefix_length) came from the prefix.
  std::size_t prefix_length = 0;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
};

// Control tokens that open every decoder input. Defaults are the standard
// multilingual vocabulary ids for start-of-transcript, English, transcribe
// and no-timestamps.
struct PrefixSpec {
  TokenId start_token = 50258;
  TokenId language_token = 50259;
  TokenId task_token = 50359;
  TokenId no_timestamps_token = 50363;

  TokenSequence tokens() const;
  bool operator==(const PrefixSpec&) const = default;
};

// z = [prefix; transcript]. Never reorders ids. The transcript may be empty
// (a silent chunk), in which case z is the prefix alone.
TokenSequence build_decoder_input(const PrefixSpec& prefix, const TokenSequence& transcript);

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual TokenSequence encode(std::string_view text) const = 0;
  virtual std::string decode(std::span<const TokenId> ids) const = 0;
  virtual std::string name() const = 0;
};

// Maps each UTF-8 byte to the id of its value (0-255). Needs no assets.
class ByteTokenizer final : public Tokenizer {
 public:
  TokenSequence encode(std::string_view text) const override;
  std::string decode(std::span<const TokenId> ids) const override;
  std::string name() const override { return "byte"; }
};

// Byte-level BPE over a vocabulary (JSON object token -> id) and a ranked
// merges list (one "left right" pair per line), the layout shipped with
// Hugging Face checkpoints of GPT-2 style tokenizers.
class BpeTokenizer final : public Tokenizer {
 public:
  // Throws ConfigError if either asset is missing or malformed.
  static BpeTokenizer load(const std::filesystem::path& vocab_json,
                           const std::filesystem::path& merges_txt);

  TokenSequence encode(std::string_view text) const override;
  std::string decode(std::span<const TokenId> ids) const override;
  std::string name() const override { return "bpe"; }

  std::size_t vocab_size() const { return vocab_.size(); }

 private:
  BpeTokenizer() = default;
  std::vector<std::string> bpe(const std::string& word) const;

  std::map<std::string, TokenId, std::less<>> vocab_;
  std::map<TokenId, std::string> inverse_;
  std::map<std::pair<std::string, std::string>, std::size_t, std::less<>> merge_ranks_;
};

// Splits text into the pre-tokens a GPT-2 byte-level BPE operates on
// (contractions, optional-space letter runs, digit runs, punctuation runs,
// whitespace). Non-ASCII code points are treated as letters.
std::vector<std::string> pretokenize(std::string_view text);

struct TokenizerConfig {
  std::string type = "byte";  // "byte" | "bpe"
  std::filesystem::path vocab;
  std::filesystem::path merges;
};

// Throws ConfigError for an unknown type or a missing asset.
std::unique_ptr<Tokenizer> make_tokenizer(const TokenizerConfig& config);

// Transcript of one utterance: either one text per chunk or a single text for
// the whole response.
struct UtteranceTranscript {
  std::vector<std::string> per_chunk;
  std::optional<std::string> whole;
};

class TranscriptProvider {
 public:
  virtual ~TranscriptProvider() = default;
  // Throws LookupError when the utterance is unknown.
  virtual UtteranceTranscript lookup(std::string_view utterance_id) const = 0;
};

class MapTranscriptProvider final : public TranscriptProvider {
 public:
  void add(std::string utterance_id, UtteranceTranscript transcript);
  UtteranceTranscript lookup(std::string_view utterance_id) const override;

 private:
  std::map<std::string, UtteranceTranscript, std::less<>> entries_;
};

// Reads <root>/<utterance_id>/chunk_001.txt, chunk_002.txt, ... or, failing
// that, <root>/<utterance_id>/transcript.txt.
class DirectoryTranscriptProvider final : public TranscriptProvider {
 public:
  explicit DirectoryTranscriptProvider(std::filesystem::path root) : root_(std::move(root)) {}
  UtteranceTranscript lookup(std::string_view utterance_id) const override;

 private:
  std::filesystem::path root_;
};

// Duration (in samples) attributed to each of K chunks when a single
// whole-utterance text has to be distributed. Each overlap is split at its
// midpoint, so every instant of the covered span belongs to exactly one chunk.
std::vector<double> chunk_duration_shares(std::size_t n_chunks, const SegmentationConfig& cfg);

// Splits the words of `text` across chunks in proportion to `shares`. Word
// boundaries fall at round(W * cumulative_share / total).
std::vector<std::string> split_words_proportionally(std::string_view text,
                                                    std::span<const double> shares);

// One text per chunk. Per-chunk entries pass through unchanged when their
// count equals K; a single text is distributed with the proportional split
// (and returned unchanged for K = 1).
// Throws LookupError if the provider lacks the utterance, DataError if the
// per-chunk count disagrees with K.
std::vector<std::string> chunk_transcripts(const TranscriptProvider& provider,
                                           std::string_view utterance_id,
                                           std::size_t n_chunks,
                                           const SegmentationConfig& cfg);

}  // namespace slascore

#endif  // SLASCORE_TOKENS_HPP_
