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

#ifndef SLASCORE_POOLING_HPP_
#define SLASCORE_POOLING_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "slascore/audio.hpp"
#include "slascore/backend.hpp"
#include "slascore/logmel.hpp"
#include "slascore/matrix.hpp"
#include "slascore/tokens.hpp"

namespace slascore {

enum class EmbeddingKind { acoustic, linguistic };

struct ChunkEmbedding {
  std::vector<double> values;
  EmbeddingKind kind = EmbeddingKind::acoustic;
  std::size_t chunk_index = 1;
};

struct UtteranceEmbedding {
  std::vector<double> values;
  EmbeddingKind kind = EmbeddingKind::acoustic;
  std::size_t n_chunks = 0;
};

struct PoolingOptions {
  // Pool decoder states over the transcript positions only. Off by default:
  // the chunk vector averages every decoder position, prefix included.
  bool exclude_prefix = false;
};

// Column means of rows [first_row, T), accumulated in double.
// Throws EmptyInputError when no rows remain.
std::vector<double> mean_pool_rows(const Matrix& states, std::size_t first_row = 0);

// Component-wise mean over chunks; records K. Throws EmptyInputError for an
// empty list, ShapeError when kinds or widths disagree.
UtteranceEmbedding mean_pool_chunks(std::span<const ChunkEmbedding> chunks);

// log-Mel -> encoder -> frame mean -> chunk mean.
UtteranceEmbedding utterance_acoustic(std::string_view utterance_id,
                                      std::span<const Chunk> chunks,
                                      const LogMelFrontend& frontend,
                                      const EmbeddingBackend& backend);

// [prefix; transcript] -> decoder -> position mean -> chunk mean.
// `transcripts` holds one tokenised transcript per chunk.
UtteranceEmbedding utterance_linguistic(std::string_view utterance_id,
                                        std::span<const Chunk> chunks,
                                        std::span<const TokenSequence> transcripts,
                                        const PrefixSpec& prefix,
                                        const LogMelFrontend& frontend,
                                        const EmbeddingBackend& backend,
                                        PoolingOptions options = {});

struct UtteranceEmbeddings {
  UtteranceEmbedding acoustic;
  UtteranceEmbedding linguistic;
};

// Both paths with a single encoder pass and a single decoder pass per chunk.
UtteranceEmbeddings utterance_embeddings(std::string_view utterance_id,
                                         std::span<const Chunk> chunks,
                                         std::span<const TokenSequence> transcripts,
                                         const PrefixSpec& prefix,
                                         const LogMelFrontend& frontend,
                                         const EmbeddingBackend& backend,
                                         PoolingOptions options = {});

}  // namespace slascore

#endif  // SLASCORE_POOLING_HPP_
