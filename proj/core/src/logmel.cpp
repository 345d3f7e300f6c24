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

#include "slascore/logmel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "slascore/error.hpp"

namespace slascore {

namespace {

constexpr double kMinLogHz = 1000.0;
constexpr double kLinearHzPerMel = 200.0 / 3.0;
constexpr double kMinLogMel = kMinLogHz / kLinearHzPerMel;  // 15
const double kLogStep = std::log(6.4) / 27.0;

constexpr double kLogFloor = 1e-10;
constexpr double kDynamicRange = 8.0;

// The FFTW planner is not re-entrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffers {
  explicit FftwBuffers(std::size_t n_fft)
      : in(fftw_alloc_real(n_fft)), out(fftw_alloc_complex(n_fft / 2 + 1)) {
    if (in == nullptr || out == nullptr) throw std::bad_alloc();
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), in, out, FFTW_ESTIMATE);
  }
  ~FftwBuffers() {
    {
      std::lock_guard lock(planner_mutex());
      if (plan != nullptr) fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
  }
  FftwBuffers(const FftwBuffers&) = delete;
  FftwBuffers& operator=(const FftwBuffers&) = delete;

  double* in;
  fftw_complex* out;
  fftw_plan plan = nullptr;
};

// Index into a reflect-padded signal ("reflect" excludes the edge sample).
std::size_t reflect_index(std::ptrdiff_t p, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t q = p % period;
  if (q < 0) q += period;
  if (q >= static_cast<std::ptrdiff_t>(n)) q = period - q;
  return static_cast<std::size_t>(q);
}

}  // namespace

double hz_to_mel(double hz) {
  if (hz < kMinLogHz) return hz / kLinearHzPerMel;
  return kMinLogMel + std::log(hz / kMinLogHz) / kLogStep;
}

double mel_to_hz(double mel) {
  if (mel < kMinLogMel) return mel * kLinearHzPerMel;
  return kMinLogHz * std::exp(kLogStep * (mel - kMinLogMel));
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

MelFilterbank MelFilterbank::create(int sample_rate, std::size_t n_fft, std::size_t n_mels) {
  if (sample_rate <= 0 || n_fft < 2 || n_mels < 1) {
    throw ConfigError("mel filterbank needs positive sample rate, n_fft >= 2, n_mels >= 1");
  }
  const std::size_t n_bins = n_fft / 2 + 1;
  const double nyquist = sample_rate / 2.0;

  std::vector<double> fft_hz(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    fft_hz[k] = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
  }

  // n_mels + 2 edge frequencies equally spaced on the mel scale.
  const double mel_max = hz_to_mel(nyquist);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_max * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  }

  MelFilterbank fb;
  fb.sample_rate_ = sample_rate;
  fb.n_fft_ = n_fft;
  fb.weights_ = Matrix(n_mels, n_bins);
  fb.centers_hz_.assign(edges.begin() + 1, edges.end() - 1);
  fb.support_begin_.assign(n_mels, n_bins);
  fb.support_end_.assign(n_mels, 0);

  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lower_width = edges[m + 1] - edges[m];
    const double upper_width = edges[m + 2] - edges[m + 1];
    const double enorm = 2.0 / (edges[m + 2] - edges[m]);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double rising = (fft_hz[k] - edges[m]) / lower_width;
      const double falling = (edges[m + 2] - fft_hz[k]) / upper_width;
      const double w = std::max(0.0, std::min(rising, falling));
      if (w > 0.0) {
        fb.weights_(m, k) = w * enorm;
        fb.support_begin_[m] = std::min(fb.support_begin_[m], k);
        fb.support_end_[m] = k + 1;
      }
    }
    if (fb.support_end_[m] == 0) {
      throw ConfigError("mel filter " + std::to_string(m) + " of " + std::to_string(n_mels) +
                        " covers no FFT bin; too many mel bins for n_fft=" +
                        std::to_string(n_fft));
    }
  }
  return fb;
}

Matrix MelFilterbank::apply(const Matrix& power) const {
  if (power.cols() != n_bins()) {
    throw ShapeError("power spectrum has " + std::to_string(power.cols()) +
                     " bins, filterbank expects " + std::to_string(n_bins()));
  }
  Matrix mel(power.rows(), n_mels());
  for (std::size_t f = 0; f < power.rows(); ++f) {
    const auto frame = power.row(f);
    for (std::size_t m = 0; m < n_mels(); ++m) {
      double acc = 0.0;
      for (std::size_t k = support_begin_[m]; k < support_end_[m]; ++k) {
        acc += weights_(m, k) * frame[k];
      }
      mel(f, m) = acc;
    }
  }
  return mel;
}

Matrix stft_power(std::span<const float> samples, std::size_t n_fft, std::size_t hop) {
  if (n_fft < 2 || hop < 1) throw ConfigError("stft needs n_fft >= 2 and hop >= 1");
  const std::size_t n = samples.size();
  const std::size_t pad = n_fft / 2;
  const std::size_t n_bins = n_fft / 2 + 1;
  if (n == 0 || n + 2 * pad < n_fft) return Matrix(0, n_bins);

  // One frame too many is produced by centred framing; the last is dropped.
  const std::size_t n_frames = (n + 2 * pad - n_fft) / hop;
  Matrix power(n_frames, n_bins);
  if (n_frames == 0) return power;

  const std::vector<double> window = hann_window(n_fft);
  FftwBuffers fft(n_fft);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const auto origin = static_cast<std::ptrdiff_t>(f * hop) - static_cast<std::ptrdiff_t>(pad);
    for (std::size_t i = 0; i < n_fft; ++i) {
      const std::ptrdiff_t p = origin + static_cast<std::ptrdiff_t>(i);
      const bool inside = p >= 0 && p < static_cast<std::ptrdiff_t>(n);
      const std::size_t idx = inside ? static_cast<std::size_t>(p) : reflect_index(p, n);
      fft.in[i] = window[i] * static_cast<double>(samples[idx]);
    }
    fftw_execute_dft_r2c(fft.plan, fft.in, fft.out);
    auto row = power.row(f);
    for (std::size_t k = 0; k < n_bins; ++k) {
      row[k] = fft.out[k][0] * fft.out[k][0] + fft.out[k][1] * fft.out[k][1];
    }
  }
  return power;
}

LogMelSpectrogram normalize_log_mel(const Matrix& mel_energies) {
  LogMelSpectrogram spec;
  spec.values = Matrix(mel_energies.rows(), mel_energies.cols());
  auto out = spec.values.values();
  const auto in = mel_energies.values();
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = std::log10(std::max(in[i], kLogFloor));
    peak = std::max(peak, out[i]);
  }
  const double floor = peak - kDynamicRange;
  for (double& x : out) x = (std::max(x, floor) + 4.0) / 4.0;
  return spec;
}

LogMelFrontend::LogMelFrontend(FrontendConfig config)
    : config_(config),
      filterbank_(MelFilterbank::create(config.sample_rate, config.n_fft, config.n_mels)) {
  if (config_.hop < 1) throw ConfigError("front-end hop must be at least 1");
}

LogMelSpectrogram LogMelFrontend::compute(std::span<const float> samples) const {
  return normalize_log_mel(filterbank_.apply(stft_power(samples, config_.n_fft, config_.hop)));
}

LogMelSpectrogram log_mel(const Chunk& chunk) {
  static const LogMelFrontend frontend;
  return frontend(chunk);
}

}  // namespace slascore
