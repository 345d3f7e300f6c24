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

#include "slascore/pooling.hpp"

#include <string>

#include "slascore/error.hpp"

namespace slascore {

namespace {

ChunkKey key_for(std::string_view utterance_id, const Chunk& chunk) {
  return {std::string(utterance_id), chunk.index};
}

ChunkEmbedding pool_decoder(const DecoderStates& dec, const TokenSequence& z,
                            std::size_t chunk_index, PoolingOptions options) {
  std::size_t first = 0;
  if (options.exclude_prefix && z.prefix_length < dec.values.rows()) first = z.prefix_length;
  return {mean_pool_rows(dec.values, first), EmbeddingKind::linguistic, chunk_index};
}

void check_transcripts(std::span<const Chunk> chunks, std::span<const TokenSequence> transcripts) {
  if (chunks.size() != transcripts.size()) {
    throw ShapeError("got " + std::to_string(transcripts.size()) + " transcripts for " +
                     std::to_string(chunks.size()) + " chunks");
  }
}

}  // namespace

std::vector<double> mean_pool_rows(const Matrix& states, std::size_t first_row) {
  if (first_row >= states.rows()) throw EmptyInputError("mean pooling over zero rows");
  std::vector<double> mean(states.cols(), 0.0);
  for (std::size_t r = first_row; r < states.rows(); ++r) {
    const auto row = states.row(r);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += row[j];
  }
  const double n = static_cast<double>(states.rows() - first_row);
  for (double& m : mean) m /= n;
  return mean;
}

UtteranceEmbedding mean_pool_chunks(std::span<const ChunkEmbedding> chunks) {
  if (chunks.empty()) throw EmptyInputError("utterance pooling over zero chunks");
  const std::size_t d = chunks.front().values.size();
  const EmbeddingKind kind = chunks.front().kind;
  UtteranceEmbedding out{std::vector<double>(d, 0.0), kind, chunks.size()};
  for (const auto& c : chunks) {
    if (c.values.size() != d) throw ShapeError("chunk embeddings differ in width");
    if (c.kind != kind) throw ShapeError("cannot pool acoustic and linguistic chunks together");
    for (std::size_t j = 0; j < d; ++j) out.values[j] += c.values[j];
  }
  const double k = static_cast<double>(chunks.size());
  for (double& v : out.values) v /= k;
  return out;
}

UtteranceEmbedding utterance_acoustic(std::string_view utterance_id,
                                      std::span<const Chunk> chunks,
                                      const LogMelFrontend& frontend,
                                      const EmbeddingBackend& backend) {
  std::vector<ChunkEmbedding> pooled;
  pooled.reserve(chunks.size());
  for (const auto& chunk : chunks) {
    const auto enc = backend.encoder_forward(key_for(utterance_id, chunk), frontend(chunk));
    pooled.push_back({mean_pool_rows(enc.values), EmbeddingKind::acoustic, chunk.index});
  }
  return mean_pool_chunks(pooled);
}

UtteranceEmbedding utterance_linguistic(std::string_view utterance_id,
                                        std::span<const Chunk> chunks,
                                        std::span<const TokenSequence> transcripts,
                                        const PrefixSpec& prefix,
                                        const LogMelFrontend& frontend,
                                        const EmbeddingBackend& backend,
                                        PoolingOptions options) {
  return utterance_embeddings(utterance_id, chunks, transcripts, prefix, frontend, backend,
                              options)
      .linguistic;
}

UtteranceEmbeddings utterance_embeddings(std::string_view utterance_id,
                                         std::span<const Chunk> chunks,
                                         std::span<const TokenSequence> transcripts,
                                         const PrefixSpec& prefix,
                                         const LogMelFrontend& frontend,
                                         const EmbeddingBackend& backend,
                                         PoolingOptions options) {
  check_transcripts(chunks, transcripts);
  std::vector<ChunkEmbedding> acoustic;
  std::vector<ChunkEmbedding> linguistic;
  acoustic.reserve(chunks.size());
  linguistic.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const ChunkKey key = key_for(utterance_id, chunks[i]);
    const auto enc = backend.encoder_forward(key, frontend(chunks[i]));
    acoustic.push_back({mean_pool_rows(enc.values), EmbeddingKind::acoustic, chunks[i].index});
    const TokenSequence z = build_decoder_input(prefix, transcripts[i]);
    const auto dec = backend.decoder_forward(key, z, enc);
    linguistic.push_back(pool_decoder(dec, z, chunks[i].index, options));
  }
  return {mean_pool_chunks(acoustic), mean_pool_chunks(linguistic)};
}

}  // namespace slascore
