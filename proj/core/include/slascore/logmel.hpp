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

#ifndef SLASCORE_LOGMEL_HPP_
#define SLASCORE_LOGMEL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "slascore/audio.hpp"
#include "slascore/matrix.hpp"

namespace slascore {

// Front-end constants of a 80-bin, 25 ms / 10 ms log-Mel pipeline at 16 kHz.
struct FrontendConfig {
  int sample_rate = kPipelineSampleRate;
  std::size_t n_fft = 400;
  std::size_t hop = 160;
  std::size_t n_mels = 80;

  bool operator==(const FrontendConfig&) const = default;
};

// F frames x M mel bins, normalised log10 domain.
struct LogMelSpectrogram {
  Matrix values;

  std::size_t n_frames() const { return values.rows(); }
  std::size_t n_mels() const { return values.cols(); }
};

// Slaney-style triangular filters, area normalised, spanning 0 Hz to Nyquist.
// Immutable after construction and safe to share between threads.
class MelFilterbank {
 public:
  // Throws ConfigError when a filter would cover no FFT bin (too many mels
  // for the FFT resolution) or the arguments are non-positive.
  static MelFilterbank create(int sample_rate, std::size_t n_fft, std::size_t n_mels);

  const Matrix& weights() const { return weights_; }  // n_mels x (n_fft/2 + 1)
  std::size_t n_mels() const { return weights_.rows(); }
  std::size_t n_bins() const { return weights_.cols(); }
  int sample_rate() const { return sample_rate_; }
  std::size_t n_fft() const { return n_fft_; }

  // Center frequency of each filter in Hz.
  const std::vector<double>& centers_hz() const { return centers_hz_; }

  // (frames x bins) power -> (frames x n_mels) mel energies.
  Matrix apply(const Matrix& power) const;

 private:
  MelFilterbank() = default;

  Matrix weights_;
  std::vector<double> centers_hz_;
  std::vector<std::size_t> support_begin_;
  std::vector<std::size_t> support_end_;
  int sample_rate_ = 0;
  std::size_t n_fft_ = 0;
};

// Slaney mel scale: linear below 1 kHz, logarithmic above.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

// Magnitude-squared STFT with a periodic Hann window. The signal is
// reflect-padded by n_fft/2 on each side and the final frame is dropped, so a
// signal of n samples yields n / hop frames for even n_fft.
Matrix stft_power(std::span<const float> samples, std::size_t n_fft = 400,
                  std::size_t hop = 160);

// mel = filterbank * power; x = log10(max(mel, 1e-10));
// x = max(x, max(x) - 8); x = (x + 4) / 4.
LogMelSpectrogram normalize_log_mel(const Matrix& mel_energies);

class LogMelFrontend {
 public:
  explicit LogMelFrontend(FrontendConfig config = {});

  LogMelSpectrogram compute(std::span<const float> samples) const;
  LogMelSpectrogram operator()(const Chunk& chunk) const { return compute(chunk.samples); }

  const FrontendConfig& config() const { return config_; }
  const MelFilterbank& filterbank() const { return filterbank_; }

 private:
  FrontendConfig config_;
  MelFilterbank filterbank_;
};

// Log-Mel spectrogram with the default front end.
LogMelSpectrogram log_mel(const Chunk& chunk);

}  // namespace slascore

#endif  // SLASCORE_LOGMEL_HPP_
