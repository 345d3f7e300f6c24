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

#include <cstdint>
#include <random>
#include <vector>

#include "slascore/audio.hpp"
#include "slascore/error.hpp"
#include "test_support.hpp"

namespace slascore {
namespace {

using testing::make_wav_bytes;
using testing::TempDir;
using testing::write_bytes;

// Offsets o = 0, S, 2S, ... while o + L <= N.
std::vector<std::size_t> enumerate_offsets(std::size_t n, std::size_t l, std::size_t s) {
  std::vector<std::size_t> out;
  for (std::size_t o = 0; o + l <= n; o += s) out.push_back(o);
  return out;
}

AudioSignal ramp(std::size_t n) {
  AudioSignal sig;
  sig.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) sig.samples[i] = static_cast<float>(i) / static_cast<float>(n + 1);
  return sig;
}

TEST(Segmentation, EightyFiveSecondsGivesThreeChunks) {
  const SegmentationConfig cfg;  // 30 s / 25 s
  const AudioSignal sig = ramp(1'360'000);
  const auto chunks = segment(sig, cfg);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0].start_offset, 0u);
  EXPECT_EQ(chunks[1].start_offset, 400'000u);
  EXPECT_EQ(chunks[2].start_offset, 800'000u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(chunks[i].index, i + 1);
    EXPECT_EQ(chunks[i].samples.size(), cfg.chunk_len);
    EXPECT_FALSE(chunks[i].padded);
  }
  // The final 5 s (samples 1,280,000 onward) are not in any chunk.
  EXPECT_EQ(chunks[2].samples.back(), sig.samples[1'279'999]);
}

TEST(Segmentation, ExactlyOneChunkLength) {
  SegmentationConfig cfg;
  const auto chunks = segment(ramp(cfg.chunk_len), cfg);
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].start_offset, 0u);
}

TEST(Segmentation, NineSamplesWindowFourStrideTwo) {
  SegmentationConfig cfg{4, 2, false};
  AudioSignal sig;
  sig.samples = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  const auto chunks = segment(sig, cfg);
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0].samples, (std::vector<float>{0, 1, 2, 3}));
  EXPECT_EQ(chunks[1].samples, (std::vector<float>{2, 3, 4, 5}));
  EXPECT_EQ(chunks[2].samples, (std::vector<float>{4, 5, 6, 7}));
}

TEST(Segmentation, ShortSignalPaddedWhenEnabled) {
  SegmentationConfig cfg{10, 5, true};
  AudioSignal sig;
  sig.samples = {0.5f, -0.5f, 0.25f};
  const auto chunks = segment(sig, cfg);
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_TRUE(chunks[0].padded);
  ASSERT_EQ(chunks[0].samples.size(), 10u);
  EXPECT_EQ(chunks[0].samples[0], 0.5f);
  EXPECT_EQ(chunks[0].samples[2], 0.25f);
  for (std::size_t i = 3; i < 10; ++i) EXPECT_EQ(chunks[0].samples[i], 0.0f);
}

TEST(Segmentation, ShortSignalDroppedWhenPaddingDisabled) {
  SegmentationConfig cfg{10, 5, false};
  EXPECT_TRUE(segment(ramp(9), cfg).empty());
  EXPECT_EQ(chunk_count(9, cfg), 0u);
}

TEST(Segmentation, EmptySignalWithPaddingGivesOneSilentChunk) {
  SegmentationConfig cfg{8, 4, true};
  const auto chunks = segment(AudioSignal{}, cfg);
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0].samples, std::vector<float>(8, 0.0f));
}

TEST(Segmentation, MatchesOffsetEnumerationOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t l = 1 + rng() % 64;
    const std::size_t s = 1 + rng() % l;
    const std::size_t n = l + rng() % 400;
    SegmentationConfig cfg{l, s, false};
    const auto expected = enumerate_offsets(n, l, s);
    ASSERT_EQ(chunk_count(n, cfg), expected.size()) << n << " " << l << " " << s;
    const auto chunks = segment(ramp(n), cfg);
    ASSERT_EQ(chunks.size(), expected.size());
    for (std::size_t k = 0; k < chunks.size(); ++k) ASSERT_EQ(chunks[k].start_offset, expected[k]);
  }
}

TEST(Segmentation, ConsecutiveChunksShareTheOverlap) {
  SegmentationConfig cfg{50, 30, false};
  const auto chunks = segment(ramp(333), cfg);
  ASSERT_GE(chunks.size(), 2u);
  const std::size_t o = cfg.overlap();
  for (std::size_t k = 0; k + 1 < chunks.size(); ++k) {
    for (std::size_t t = 0; t < o; ++t) {
      ASSERT_EQ(chunks[k].samples[cfg.chunk_len - o + t], chunks[k + 1].samples[t]);
    }
  }
}

TEST(Segmentation, StrideEqualToLengthIsAllowed) {
  SegmentationConfig cfg{5, 5, false};
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(segment(ramp(17), cfg).size(), 3u);
}

TEST(Segmentation, IsPure) {
  SegmentationConfig cfg{7, 3, true};
  const AudioSignal sig = ramp(40);
  const auto a = segment(sig, cfg);
  const auto b = segment(sig, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].samples, b[k].samples);
}

TEST(Segmentation, InvalidConfigsRejected) {
  EXPECT_THROW((SegmentationConfig{4, 0, true}.validate()), ConfigError);
  EXPECT_THROW((SegmentationConfig{4, 5, true}.validate()), ConfigError);
  EXPECT_THROW(SegmentationConfig::from_seconds(30, 31), ConfigError);
  EXPECT_THROW(SegmentationConfig::from_seconds(0, 0), ConfigError);
  const auto cfg = SegmentationConfig::from_seconds(30, 25);
  EXPECT_EQ(cfg.chunk_len, 480'000u);
  EXPECT_EQ(cfg.stride, 400'000u);
  EXPECT_EQ(cfg.overlap(), 80'000u);
}

TEST(Wav, OneSecondFileHasSixteenThousandSamples) {
  TempDir dir;
  AudioSignal sig;
  sig.samples.assign(16000, 0.25f);
  write_wav(dir / "a.wav", sig);
  const AudioSignal back = load_audio(dir / "a.wav");
  EXPECT_EQ(back.size(), 16000u);
  EXPECT_EQ(back.sample_rate, 16000);
  EXPECT_DOUBLE_EQ(back.duration_seconds(), 1.0);
  EXPECT_EQ(back.samples[0], 0.25f);
}

TEST(Wav, MostNegativeSampleMapsToMinusOne) {
  TempDir dir;
  write_bytes(dir / "m.wav", make_wav_bytes(1, 1, 16000, 16, {-32768, 32767, 0, 16384}));
  const AudioSignal sig = load_audio(dir / "m.wav");
  ASSERT_EQ(sig.size(), 4u);
  EXPECT_EQ(sig.samples[0], -1.0f);
  EXPECT_EQ(sig.samples[1], 32767.0f / 32768.0f);
  EXPECT_EQ(sig.samples[2], 0.0f);
  EXPECT_EQ(sig.samples[3], 0.5f);
}

TEST(Wav, RoundTripPreservesQuantisedSamples) {
  TempDir dir;
  AudioSignal sig;
  for (int v = -32768; v < 32768; v += 97) sig.samples.push_back(static_cast<float>(v) / 32768.0f);
  write_wav(dir / "r.wav", sig);
  EXPECT_EQ(load_audio(dir / "r.wav").samples, sig.samples);
}

TEST(Wav, StereoRejectedNamingChannels) {
  TempDir dir;
  write_bytes(dir / "s.wav", make_wav_bytes(1, 2, 16000, 16, {0, 0, 1, 1}));
  try {
    load_audio(dir / "s.wav");
    FAIL() << "stereo accepted";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("channel"), std::string::npos);
  }
}

TEST(Wav, WrongRateRejectedNamingRate) {
  TempDir dir;
  write_bytes(dir / "r.wav", make_wav_bytes(1, 1, 44100, 16, {0, 0}));
  try {
    load_audio(dir / "r.wav");
    FAIL() << "44.1 kHz accepted";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("sample rate"), std::string::npos);
  }
}

TEST(Wav, WrongBitDepthAndEncodingRejected) {
  TempDir dir;
  write_bytes(dir / "b.wav", make_wav_bytes(1, 1, 16000, 8, {0}));
  EXPECT_THROW(load_audio(dir / "b.wav"), FormatError);
  write_bytes(dir / "f.wav", make_wav_bytes(3, 1, 16000, 16, {0}));
  EXPECT_THROW(load_audio(dir / "f.wav"), FormatError);
}

TEST(Wav, TruncatedOrMissingFileIsIoError) {
  TempDir dir;
  std::string bytes = make_wav_bytes(1, 1, 16000, 16, {1, 2, 3, 4, 5, 6});
  bytes.resize(bytes.size() - 5);
  write_bytes(dir / "t.wav", bytes);
  EXPECT_THROW(load_audio(dir / "t.wav"), IoError);
  write_bytes(dir / "h.wav", "RIFF");
  EXPECT_THROW(load_audio(dir / "h.wav"), IoError);
  EXPECT_THROW(load_audio(dir / "absent.wav"), IoError);
}

TEST(Wav, NonRiffIsFormatError) {
  TempDir dir;
  write_bytes(dir / "x.wav", std::string(64, 'x'));
  EXPECT_THROW(load_audio(dir / "x.wav"), FormatError);
}

}  // namespace
}  // namespace slascore
