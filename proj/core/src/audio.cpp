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

#include "slascore/audio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "slascore/error.hpp"

namespace slascore {

namespace {

constexpr std::uint16_t kWaveFormatPcm = 1;
constexpr std::uint16_t kWaveFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xFF));
  }
}

}  // namespace

void SegmentationConfig::validate() const {
  if (stride < 1) throw ConfigError("segmentation stride must be at least 1 sample");
  if (stride > chunk_len) {
    throw ConfigError("segmentation stride (" + std::to_string(stride) +
                      ") exceeds chunk length (" + std::to_string(chunk_len) + ")");
  }
}

SegmentationConfig SegmentationConfig::from_seconds(double chunk_seconds,
                                                    double stride_seconds,
                                                    int sample_rate, bool pad_short) {
  if (!(chunk_seconds > 0.0) || !(stride_seconds > 0.0)) {
    throw ConfigError("segmentation durations must be positive");
  }
  SegmentationConfig cfg;
  cfg.chunk_len = static_cast<std::size_t>(std::llround(chunk_seconds * sample_rate));
  cfg.stride = static_cast<std::size_t>(std::llround(stride_seconds * sample_rate));
  cfg.pad_short = pad_short;
  cfg.validate();
  return cfg;
}

AudioSignal load_audio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open audio file " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  const std::string where = " in " + path.string();

  if (size < 12) throw IoError("truncated RIFF header" + where);
  if (std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0) {
    throw FormatError("container is not RIFF/WAVE" + where);
  }

  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const std::uint32_t chunk_size = read_u32(data + pos + 4);
    const unsigned char* body = data + pos + 8;
    const std::size_t body_pos = pos + 8;

    if (std::memcmp(data + pos, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body_pos + 16 > size) throw IoError("truncated fmt chunk" + where);
      std::uint16_t format = read_u16(body);
      const std::uint16_t channels = read_u16(body + 2);
      const std::uint32_t rate = read_u32(body + 4);
      const std::uint16_t bits = read_u16(body + 14);
      if (format == kWaveFormatExtensible && chunk_size >= 40 && body_pos + 26 <= size) {
        format = read_u16(body + 24);  // first two bytes of the subformat GUID
      }
      if (format != kWaveFormatPcm) {
        throw FormatError("unsupported sample encoding (format tag " +
                          std::to_string(format) + ", expected integer PCM)" + where);
      }
      if (channels != 1) {
        throw FormatError("unsupported channel count " + std::to_string(channels) +
                          " (expected mono)" + where);
      }
      if (rate != static_cast<std::uint32_t>(kPipelineSampleRate)) {
        throw FormatError("unsupported sample rate " + std::to_string(rate) +
                          " Hz (expected 16000 Hz)" + where);
      }
      if (bits != 16) {
        throw FormatError("unsupported bit depth " + std::to_string(bits) +
                          " (expected 16-bit)" + where);
      }
      have_fmt = true;
    } else if (std::memcmp(data + pos, "data", 4) == 0) {
      if (!have_fmt) throw FormatError("data chunk precedes fmt chunk" + where);
      if (body_pos + chunk_size > size) {
        throw IoError("truncated data chunk (" + std::to_string(size - body_pos) + " of " +
                      std::to_string(chunk_size) + " bytes)" + where);
      }
      if (chunk_size % 2 != 0) throw IoError("data chunk has a partial sample" + where);
      AudioSignal signal;
      signal.sample_rate = kPipelineSampleRate;
      signal.samples.resize(chunk_size / 2);
      for (std::size_t i = 0; i < signal.samples.size(); ++i) {
        const auto value = static_cast<std::int16_t>(read_u16(body + 2 * i));
        signal.samples[i] = static_cast<float>(value) / 32768.0f;
      }
      return signal;
    }
    pos = body_pos + chunk_size + (chunk_size & 1U);
  }
  if (!have_fmt) throw IoError("missing fmt chunk" + where);
  throw IoError("missing data chunk" + where);
}

void write_wav(const std::filesystem::path& path, const AudioSignal& signal) {
  if (signal.sample_rate != kPipelineSampleRate) {
    throw FormatError("write_wav only emits 16000 Hz audio");
  }
  const auto data_bytes = static_cast<std::uint32_t>(signal.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, kWaveFormatPcm);
  put_u16(out, 1);
  put_u32(out, kPipelineSampleRate);
  put_u32(out, kPipelineSampleRate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (float s : signal.samples) {
    const double scaled = std::round(static_cast<double>(s) * 32768.0);
    const auto value = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(out, static_cast<std::uint16_t>(value));
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write audio file " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("short write to " + path.string());
}

std::size_t chunk_count(std::size_t n_samples, const SegmentationConfig& cfg) {
  cfg.validate();
  if (n_samples < cfg.chunk_len) return 0;
  return (n_samples - cfg.chunk_len) / cfg.stride + 1;
}

std::vector<Chunk> segment(const AudioSignal& signal, const SegmentationConfig& cfg) {
  const std::size_t n = signal.size();
  const std::size_t count = chunk_count(n, cfg);
  std::vector<Chunk> chunks;

  if (count == 0) {
    if (cfg.pad_short) {
      Chunk& c = chunks.emplace_back();
      c.padded = true;
      c.samples.assign(cfg.chunk_len, 0.0f);
      std::copy(signal.samples.begin(), signal.samples.end(), c.samples.begin());
    }
    return chunks;
  }

  chunks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Chunk& c = chunks.emplace_back();
    c.index = i + 1;
    c.start_offset = i * cfg.stride;
    const auto first = signal.samples.begin() + static_cast<std::ptrdiff_t>(c.start_offset);
    c.samples.assign(first, first + static_cast<std::ptrdiff_t>(cfg.chunk_len));
  }
  return chunks;
}

}  // namespace slascore
