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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "slascore/audio.hpp"
#include "slascore/backend.hpp"
#include "slascore/error.hpp"
#include "slascore/logmel.hpp"
#include "slascore/pooling.hpp"
#include "slascore/tokens.hpp"

namespace slascore {
namespace {

double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

AudioSignal noise(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<float> g(0.0f, 0.1f);
  AudioSignal s;
  s.samples.resize(n);
  for (float& v : s.samples) v = g(rng);
  return s;
}

TEST(MeanPoolRows, BasicCases) {
  Matrix c(4, 3);
  for (std::size_t r = 0; r < 4; ++r) { c(r, 0) = 1.5; c(r, 1) = -2.0; c(r, 2) = 0.25; }
  EXPECT_EQ(mean_pool_rows(c), (std::vector<double>{1.5, -2.0, 0.25}));

  Matrix m(2, 2);
  m(0, 0) = 1; m(0, 1) = 3; m(1, 0) = 3; m(1, 1) = 1;
  EXPECT_EQ(mean_pool_rows(m), (std::vector<double>{2, 2}));
  EXPECT_EQ(mean_pool_rows(m, 1), (std::vector<double>{3, 1}));
  EXPECT_THROW(mean_pool_rows(m, 2), EmptyInputError);
  EXPECT_THROW(mean_pool_rows(Matrix(0, 4)), EmptyInputError);
}

TEST(MeanPoolRows, RowPermutationInvariant) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix m(7, 5);
  for (double& v : m.values()) v = u(rng);
  Matrix p(7, 5);
  const std::vector<std::size_t> perm{3, 0, 6, 1, 5, 2, 4};
  for (std::size_t r = 0; r < 7; ++r) std::copy(m.row(perm[r]).begin(), m.row(perm[r]).end(), p.row(r).begin());
  const auto a = mean_pool_rows(m);
  const auto b = mean_pool_rows(p);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(a[j], b[j], 1e-15);
}

TEST(MeanPoolChunks, IdentitySymmetryAndOracle) {
  const ChunkEmbedding v{{1.0, -2.0, 3.0}, EmbeddingKind::acoustic, 1};
  const auto single = mean_pool_chunks(std::vector{v});
  EXPECT_EQ(single.values, v.values);
  EXPECT_EQ(single.n_chunks, 1u);

  ChunkEmbedding neg = v;
  for (double& x : neg.values) x = -x;
  for (double x : mean_pool_chunks(std::vector{v, neg}).values) EXPECT_EQ(x, 0.0);

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<ChunkEmbedding> three(3);
  for (auto& c : three) { c.values.resize(8); for (double& x : c.values) x = u(rng); }
  const auto pooled = mean_pool_chunks(three);
  EXPECT_EQ(pooled.n_chunks, 3u);
  for (std::size_t j = 0; j < 8; ++j) {
    const double oracle = (three[0].values[j] + three[1].values[j] + three[2].values[j]) / 3.0;
    EXPECT_NEAR(pooled.values[j], oracle, 1e-12);
  }
}

TEST(MeanPoolChunks, OrderInvariant) {
  std::vector<ChunkEmbedding> chunks(4);
  for (std::size_t i = 0; i < 4; ++i) chunks[i].values = {0.1 * i, std::sin(double(i)), -1.0 * i};
  auto reversed = chunks;
  std::reverse(reversed.begin(), reversed.end());
  const auto a = mean_pool_chunks(chunks).values;
  const auto b = mean_pool_chunks(reversed).values;
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(a[j], b[j], 1e-15);
}

TEST(MeanPoolChunks, Errors) {
  EXPECT_THROW(mean_pool_chunks(std::vector<ChunkEmbedding>{}), EmptyInputError);
  const ChunkEmbedding a{{1.0, 2.0}, EmbeddingKind::acoustic, 1};
  const ChunkEmbedding b{{1.0}, EmbeddingKind::acoustic, 2};
  const ChunkEmbedding c{{1.0, 2.0}, EmbeddingKind::linguistic, 2};
  EXPECT_THROW(mean_pool_chunks(std::vector{a, b}), ShapeError);
  EXPECT_THROW(mean_pool_chunks(std::vector{a, c}), ShapeError);
}

class UtterancePooling : public ::testing::Test {
 protected:
  SegmentationConfig seg_{3200, 2400, true};  // 200 ms windows, 50 ms overlap
  LogMelFrontend frontend_;
  MockBackend mock_;
  PrefixSpec prefix_;
  ByteTokenizer tok_;
};

TEST_F(UtterancePooling, HierarchicalEqualsFlatAcousticMean) {
  for (std::size_t k = 1; k <= 6; ++k) {
    const std::size_t n = seg_.chunk_len + (k - 1) * seg_.stride + 100;
    const auto chunks = segment(noise(n, static_cast<std::uint32_t>(k)), seg_);
    ASSERT_EQ(chunks.size(), k);
    std::vector<double> flat(16, 0.0);
    std::size_t rows = 0;
    for (const auto& c : chunks) {
      const auto enc = mock_.encoder_forward({"u", c.index}, frontend_(c));
      for (std::size_t t = 0; t < enc.values.rows(); ++t, ++rows) {
        for (std::size_t j = 0; j < 16; ++j) flat[j] += enc.values(t, j);
      }
    }
    const auto v = utterance_acoustic("u", chunks, frontend_, mock_);
    EXPECT_EQ(v.n_chunks, k);
    for (std::size_t j = 0; j < 16; ++j) {
      const double f = flat[j] / static_cast<double>(rows);
      EXPECT_LE(std::abs(v.values[j] - f), 1e-6 * std::max(std::abs(f), 1e-12)) << k << " " << j;
    }
  }
}

TEST_F(UtterancePooling, IdenticalChunksEqualOneChunk) {
  const auto one = segment(noise(seg_.chunk_len, 77), seg_);
  const std::vector<Chunk> three{one[0], one[0], one[0]};
  const std::vector<TokenSequence> t1{tok_.encode("hello")};
  const std::vector<TokenSequence> t3{t1[0], t1[0], t1[0]};
  const auto a = utterance_embeddings("u", one, t1, prefix_, frontend_, mock_);
  const auto b = utterance_embeddings("u", three, t3, prefix_, frontend_, mock_);
  for (std::size_t j = 0; j < 16; ++j) {
    EXPECT_NEAR(a.acoustic.values[j], b.acoustic.values[j], 1e-15);
    EXPECT_NEAR(a.linguistic.values[j], b.linguistic.values[j], 1e-15);
  }
  EXPECT_EQ(b.linguistic.n_chunks, 3u);
}

TEST_F(UtterancePooling, EightyFiveSecondExampleRecordsThreeChunks) {
  const SegmentationConfig full;
  const auto chunks = segment(noise(1'360'000, 5), full);
  const auto v = utterance_acoustic("u", chunks, frontend_, mock_);
  EXPECT_EQ(v.n_chunks, 3u);
}

TEST_F(UtterancePooling, LinguisticPoolsPrefixByDefault) {
  const auto chunks = segment(noise(seg_.chunk_len, 3), seg_);
  const std::vector<TokenSequence> t{tok_.encode("ab")};
  const auto lin = utterance_linguistic("u", chunks, t, prefix_, frontend_, mock_);
  const auto enc = mock_.encoder_forward({"u", 1}, frontend_(chunks[0]));
  const auto g = mean_pool_rows(enc.values);
  const std::vector<TokenId> z{50258, 50259, 50359, 50363, 97, 98};
  for (std::size_t j = 0; j < 16; ++j) {
    double e = 0.0;
    for (TokenId id : z) e += MockBackend::token_embedding(id, j);
    EXPECT_NEAR(lin.values[j], e / 6.0 + g[j], 1e-12);
  }

  const auto excl = utterance_linguistic("u", chunks, t, prefix_, frontend_, mock_, {true});
  for (std::size_t j = 0; j < 16; ++j) {
    const double e = (MockBackend::token_embedding(97, j) + MockBackend::token_embedding(98, j)) / 2.0;
    EXPECT_NEAR(excl.values[j], e + g[j], 1e-12);
  }
}

TEST_F(UtterancePooling, ExcludePrefixWithSilentChunkPoolsPrefix) {
  const auto chunks = segment(noise(seg_.chunk_len, 3), seg_);
  const std::vector<TokenSequence> t{TokenSequence{}};
  const auto with = utterance_linguistic("u", chunks, t, prefix_, frontend_, mock_, {true});
  const auto without = utterance_linguistic("u", chunks, t, prefix_, frontend_, mock_, {false});
  EXPECT_EQ(with.values, without.values);
}

TEST_F(UtterancePooling, OneEncoderAndOneDecoderPassPerChunk) {
  const auto chunks = segment(noise(seg_.chunk_len + 3 * seg_.stride, 8), seg_);
  ASSERT_EQ(chunks.size(), 4u);
  std::vector<TokenSequence> t;
  for (std::size_t i = 0; i < chunks.size(); ++i) t.push_back(tok_.encode("chunk " + std::to_string(i)));
  const CountingBackend counting(mock_);
  utterance_embeddings("u", chunks, t, prefix_, frontend_, counting);
  EXPECT_EQ(counting.encoder_calls(), 4u);
  EXPECT_EQ(counting.decoder_calls(), 4u);
}

TEST_F(UtterancePooling, OutputNormBoundedByLargestRowNorm) {
  const auto chunks = segment(noise(seg_.chunk_len + 2 * seg_.stride, 12), seg_);
  double max_row = 0.0;
  for (const auto& c : chunks) {
    const auto enc = mock_.encoder_forward({"u", c.index}, frontend_(c));
    for (std::size_t t = 0; t < enc.values.rows(); ++t) max_row = std::max(max_row, norm(enc.values.row(t)));
  }
  EXPECT_LE(norm(utterance_acoustic("u", chunks, frontend_, mock_).values), max_row + 1e-12);
}

TEST_F(UtterancePooling, TranscriptCountMustMatchChunks) {
  const auto chunks = segment(noise(seg_.chunk_len + seg_.stride, 1), seg_);
  const std::vector<TokenSequence> t{tok_.encode("x")};
  EXPECT_THROW(utterance_embeddings("u", chunks, t, prefix_, frontend_, mock_), ShapeError);
}

}  // namespace
}  // namespace slascore
