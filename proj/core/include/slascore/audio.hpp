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

#ifndef SLASCORE_AUDIO_HPP_
#define SLASCORE_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <vector>

namespace slascore {

inline constexpr int kPipelineSampleRate = 16000;

// Mono PCM signal with amplitudes in [-1, 1].
struct AudioSignal {
  std::vector<float> samples;
  int sample_rate = kPipelineSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Fixed-length windowing of a signal. Chunks are chunk_len samples long and
// start every stride samples; consecutive chunks share overlap() samples.
struct SegmentationConfig {
  std::size_t chunk_len = 30 * kPipelineSampleRate;
  std::size_t stride = 25 * kPipelineSampleRate;
  // Zero-pad a signal shorter than one chunk into a single chunk instead of
  // producing nothing.
  bool pad_short = true;

  std::size_t overlap() const { return chunk_len - stride; }

  // Throws ConfigError unless 1 <= stride <= chunk_len.
  void validate() const;

  static SegmentationConfig from_seconds(double chunk_seconds, double stride_seconds,
                                         int sample_rate = kPipelineSampleRate,
                                         bool pad_short = true);
};

struct Chunk {
  std::size_t index = 1;  // 1-based position within the utterance
  std::size_t start_offset = 0;
  bool padded = false;  // true when produced from a short signal under pad_short
  std::vector<float> samples;
};

// Reads a RIFF/WAVE file holding 16-bit signed mono PCM at 16 kHz.
// Integer samples are divided by 32768.
// Throws FormatError naming the offending property, IoError on a missing or
// truncated file.
AudioSignal load_audio(const std::filesystem::path& path);

// Writes 16-bit mono PCM. Samples are clipped to [-1, 1) and rounded.
void write_wav(const std::filesystem::path& path, const AudioSignal& signal);

// Number of complete chunks, floor((n - L) / S) + 1, or 0 when n < L.
std::size_t chunk_count(std::size_t n_samples, const SegmentationConfig& cfg);

// Splits the signal into chunks at offsets 0, S, 2S, ... keeping only complete
// windows. Trailing samples past the last complete window are dropped.
std::vector<Chunk> segment(const AudioSignal& signal, const SegmentationConfig& cfg);

}  // namespace slascore

#endif  // SLASCORE_AUDIO_HPP_
