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

#include "slascore/backend.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "slascore/error.hpp"
#include "slascore/tensor_io.hpp"

namespace slascore {

namespace {

std::string describe(const ChunkKey& key) {
  return key.utterance_id + " chunk " + std::to_string(key.chunk_index);
}

}  // namespace

MockBackend::MockBackend() : descriptor_{"mock", kHiddenDim, 2} {}

double MockBackend::token_embedding(TokenId token, std::size_t j) {
  return std::sin(static_cast<double>(token + 1) * static_cast<double>(j + 1) * 1e-3);
}

EncoderStates MockBackend::encoder_forward(const ChunkKey& key,
                                           const LogMelSpectrogram& spec) const {
  const std::size_t frames = spec.n_frames();
  if (frames < 2 || frames % 2 != 0 || spec.n_mels() == 0) {
    throw ShapeError("mock encoder needs an even, non-zero frame count; got " +
                     std::to_string(frames) + " x " + std::to_string(spec.n_mels()) + " for " +
                     describe(key));
  }
  const std::size_t d = descriptor_.hidden_dim;
  std::vector<double> a(d);
  std::vector<double> b(d);
  for (std::size_t j = 0; j < d; ++j) {
    a[j] = std::sin(0.1 * static_cast<double>(j + 1));
    b[j] = 0.01 * std::cos(0.1 * static_cast<double>(j + 1));
  }

  const std::size_t rows = frames / 2;
  const double mels = static_cast<double>(spec.n_mels());
  EncoderStates enc{Matrix(rows, d)};
  for (std::size_t t = 0; t < rows; ++t) {
    double even = 0.0;
    double odd = 0.0;
    for (double v : spec.values.row(2 * t)) even += v;
    for (double v : spec.values.row(2 * t + 1)) odd += v;
    const double m = 0.5 * (even / mels + odd / mels);
    auto row = enc.values.row(t);
    for (std::size_t j = 0; j < d; ++j) row[j] = a[j] * m + b[j];
  }
  return enc;
}

DecoderStates MockBackend::decoder_forward(const ChunkKey& key, const TokenSequence& tokens,
                                           const EncoderStates& enc) const {
  const std::size_t d = descriptor_.hidden_dim;
  if (tokens.empty()) throw EmptyInputError("decoder input is empty for " + describe(key));
  if (enc.values.rows() == 0 || enc.values.cols() != d) {
    throw ShapeError("mock decoder needs non-empty " + std::to_string(d) +
                     "-wide encoder states for " + describe(key));
  }
  std::vector<double> context(d, 0.0);
  for (std::size_t t = 0; t < enc.values.rows(); ++t) {
    const auto row = enc.values.row(t);
    for (std::size_t j = 0; j < d; ++j) context[j] += row[j];
  }
  for (double& c : context) c /= static_cast<double>(enc.values.rows());

  DecoderStates dec{Matrix(tokens.size(), d)};
  for (std::size_t p = 0; p < tokens.size(); ++p) {
    auto row = dec.values.row(p);
    for (std::size_t j = 0; j < d; ++j) row[j] = token_embedding(tokens.ids[p], j) + context[j];
  }
  return dec;
}

FileBackend::FileBackend(std::filesystem::path root) : root_(std::move(root)) {
  if (!std::filesystem::is_directory(root_)) {
    throw ConfigError("embedding directory " + root_.string() + " does not exist");
  }
  const auto meta_path = root_ / "export.json";
  std::ifstream in(meta_path);
  if (!in) throw ConfigError("missing " + meta_path.string());
  nlohmann::json meta;
  try {
    in >> meta;
    descriptor_.name = meta.value("name", std::string("files"));
    descriptor_.hidden_dim = meta.at("hidden_dim").get<std::size_t>();
    descriptor_.downsample_factor = meta.value("downsample_factor", std::size_t{2});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid " + meta_path.string() + ": " + e.what());
  }
  if (descriptor_.hidden_dim < 1 || descriptor_.downsample_factor < 1) {
    throw ConfigError(meta_path.string() + ": hidden_dim and downsample_factor must be >= 1");
  }
}

std::filesystem::path FileBackend::tensor_path(const ChunkKey& key, std::string_view kind) const {
  std::ostringstream name;
  name << "chunk_";
  name.width(3);
  name.fill('0');
  name << key.chunk_index << '.' << kind << ".tensor";
  return root_ / key.utterance_id / name.str();
}

Matrix FileBackend::load_states(const ChunkKey& key, std::string_view kind,
                                std::size_t expected_rows) const {
  const auto path = tensor_path(key, kind);
  if (!std::filesystem::exists(path)) {
    throw LookupError("no " + std::string(kind) + " tensor for " + describe(key) + " at " +
                      path.string());
  }
  const Tensor t = read_tensor(path);
  if (t.shape.size() != 2 || t.shape[0] != expected_rows ||
      t.shape[1] != descriptor_.hidden_dim) {
    std::string got;
    for (std::size_t dim : t.shape) got += (got.empty() ? "" : ",") + std::to_string(dim);
    throw IntegrityError(path.string() + ": shape [" + got + "], expected [" +
                         std::to_string(expected_rows) + "," +
                         std::to_string(descriptor_.hidden_dim) + "]");
  }
  for (float v : t.data) {
    if (!std::isfinite(v)) throw IntegrityError(path.string() + ": non-finite value");
  }
  return matrix_from_tensor(t);
}

EncoderStates FileBackend::encoder_forward(const ChunkKey& key,
                                           const LogMelSpectrogram& spec) const {
  return {load_states(key, "enc", spec.n_frames() / descriptor_.downsample_factor)};
}

DecoderStates FileBackend::decoder_forward(const ChunkKey& key, const TokenSequence& tokens,
                                           const EncoderStates& /*enc*/) const {
  if (tokens.empty()) throw EmptyInputError("decoder input is empty for " + describe(key));
  return {load_states(key, "dec", tokens.size())};
}

EncoderStates CountingBackend::encoder_forward(const ChunkKey& key,
                                               const LogMelSpectrogram& spec) const {
  ++encoder_calls_;
  return inner_.encoder_forward(key, spec);
}

DecoderStates CountingBackend::decoder_forward(const ChunkKey& key, const TokenSequence& tokens,
                                               const EncoderStates& enc) const {
  ++decoder_calls_;
  return inner_.decoder_forward(key, tokens, enc);
}

std::unique_ptr<EmbeddingBackend> make_backend(std::string_view selector) {
  if (selector == "mock") return std::make_unique<MockBackend>();
  constexpr std::string_view kFiles = "files:";
  if (selector.starts_with(kFiles) && selector.size() > kFiles.size()) {
    return std::make_unique<FileBackend>(std::string(selector.substr(kFiles.size())));
  }
  throw ConfigError("unknown backend \"" + std::string(selector) +
                    "\" (expected mock or files:<dir>)");
}

}  // namespace slascore
