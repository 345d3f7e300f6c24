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

#ifndef SLASCORE_BACKEND_HPP_
#define SLASCORE_BACKEND_HPP_

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "slascore/logmel.hpp"
#include "slascore/matrix.hpp"
#include "slascore/tokens.hpp"

namespace slascore {

struct BackendDescriptor {
  std::string name;
  std::size_t hidden_dim = 0;
  // Encoder time reduction: input frames per output state.
  std::size_t downsample_factor = 2;
};

// Last encoder hidden states of one chunk, (F / downsample) x d.
struct EncoderStates {
  Matrix values;
};

// Last decoder hidden states for one decoder input, T_z x d.
struct DecoderStates {
  Matrix values;
};

// Identifies one chunk of one utterance; chunk_index is 1-based.
struct ChunkKey {
  std::string utterance_id;
  std::size_t chunk_index = 1;
};

// Produces the hidden states the pooling stages consume. Implementations are
// immutable once constructed; every method may be called concurrently.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  virtual const BackendDescriptor& descriptor() const = 0;

  virtual EncoderStates encoder_forward(const ChunkKey& key,
                                        const LogMelSpectrogram& spec) const = 0;

  // One forward pass over the whole decoder input (no generation).
  virtual DecoderStates decoder_forward(const ChunkKey& key, const TokenSequence& tokens,
                                        const EncoderStates& enc) const = 0;
};

// Closed-form stand-in for a speech encoder/decoder, d = 16.
//
//   encoder: H[t, j] = a_j * m_t + b_j, where m_t is the mel-bin mean of
//            frames 2t and 2t+1 averaged, a_j = sin(0.1 (j+1)),
//            b_j = 0.01 cos(0.1 (j+1)).
//   decoder: row p = E[token_p] + g, with E[k, j] = sin((k+1)(j+1) 1e-3) and
//            g the row mean of the encoder states.
class MockBackend final : public EmbeddingBackend {
 public:
  static constexpr std::size_t kHiddenDim = 16;

  MockBackend();

  const BackendDescriptor& descriptor() const override { return descriptor_; }
  EncoderStates encoder_forward(const ChunkKey& key,
                                const LogMelSpectrogram& spec) const override;
  DecoderStates decoder_forward(const ChunkKey& key, const TokenSequence& tokens,
                                const EncoderStates& enc) const override;

  static double token_embedding(TokenId token, std::size_t j);

 private:
  BackendDescriptor descriptor_;
};

// Serves tensors exported by an external model run from
//   <root>/<utterance_id>/chunk_<iii>.enc.tensor   (F/downsample x d)
//   <root>/<utterance_id>/chunk_<iii>.dec.tensor   (T_z x d)
// with the descriptor read from <root>/export.json ({"hidden_dim": d, ...}).
class FileBackend final : public EmbeddingBackend {
 public:
  // Throws ConfigError if the directory or export.json is missing/invalid.
  explicit FileBackend(std::filesystem::path root);

  const BackendDescriptor& descriptor() const override { return descriptor_; }
  // LookupError when the tensor is absent; IntegrityError on a shape mismatch
  // or non-finite values.
  EncoderStates encoder_forward(const ChunkKey& key,
                                const LogMelSpectrogram& spec) const override;
  DecoderStates decoder_forward(const ChunkKey& key, const TokenSequence& tokens,
                                const EncoderStates& enc) const override;

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path tensor_path(const ChunkKey& key, std::string_view kind) const;

 private:
  Matrix load_states(const ChunkKey& key, std::string_view kind, std::size_t expected_rows) const;

  std::filesystem::path root_;
  BackendDescriptor descriptor_;
};

// Decorator recording how many forward passes reach the wrapped backend.
class CountingBackend final : public EmbeddingBackend {
 public:
  explicit CountingBackend(const EmbeddingBackend& inner) : inner_(inner) {}

  const BackendDescriptor& descriptor() const override { return inner_.descriptor(); }
  EncoderStates encoder_forward(const ChunkKey& key,
                                const LogMelSpectrogram& spec) const override;
  DecoderStates decoder_forward(const ChunkKey& key, const TokenSequence& tokens,
                                const EncoderStates& enc) const override;

  std::size_t encoder_calls() const { return encoder_calls_.load(); }
  std::size_t decoder_calls() const { return decoder_calls_.load(); }

 private:
  const EmbeddingBackend& inner_;
  mutable std::atomic<std::size_t> encoder_calls_{0};
  mutable std::atomic<std::size_t> decoder_calls_{0};
};

// "mock" or "files:<dir>". Throws ConfigError otherwise.
std::unique_ptr<EmbeddingBackend> make_backend(std::string_view selector);

}  // namespace slascore

#endif  // SLASCORE_BACKEND_HPP_
