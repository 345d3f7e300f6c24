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

#include "slascore/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include <nlohmann/json.hpp>

#include "slascore/error.hpp"

namespace slascore {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t dim : shape) {
    if (dim != 0 && n > std::numeric_limits<std::size_t>::max() / dim) {
      throw IntegrityError("tensor shape overflows");
    }
    n *= dim;
  }
  return n;
}

void put_le32(char* out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out[b] = static_cast<char>((v >> (8 * b)) & 0xFF);
}

std::uint32_t get_le32(const char* in) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[b])) << (8 * b);
  }
  return v;
}

const nlohmann::json& require(const nlohmann::json& header, const char* key) {
  const auto it = header.find(key);
  if (it == header.end()) {
    throw IntegrityError(std::string("tensor header missing field \"") + key + "\"");
  }
  return *it;
}

void require_string(const nlohmann::json& header, const char* key, std::string_view expected) {
  const auto& value = require(header, key);
  if (!value.is_string() || value.get<std::string>() != expected) {
    throw IntegrityError(std::string("tensor header field \"") + key + "\" must be \"" +
                         std::string(expected) + "\"");
  }
}

}  // namespace

std::size_t Tensor::element_count() const { return product(shape); }

std::string encode_tensor(const Tensor& tensor) {
  const std::size_t count = tensor.element_count();
  if (count != tensor.data.size()) {
    throw ShapeError("tensor \"" + tensor.name + "\" holds " +
                     std::to_string(tensor.data.size()) + " values but its shape implies " +
                     std::to_string(count));
  }
  nlohmann::ordered_json header;
  header["name"] = tensor.name;
  header["dtype"] = "f32";
  header["shape"] = tensor.shape;
  header["order"] = "row-major";
  header["endian"] = "little";

  std::string out = header.dump();
  out.push_back('\n');
  const std::size_t offset = out.size();
  out.resize(offset + 4 * count);
  for (std::size_t i = 0; i < count; ++i) {
    put_le32(out.data() + offset + 4 * i, std::bit_cast<std::uint32_t>(tensor.data[i]));
  }
  return out;
}

Tensor decode_tensor(std::string_view bytes) {
  const std::size_t newline = bytes.find('\n');
  if (newline == std::string_view::npos) {
    throw IntegrityError("tensor header is not terminated by a newline");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, newline));
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("tensor header is not valid JSON: ") + e.what());
  }
  if (!header.is_object()) throw IntegrityError("tensor header is not a JSON object");

  Tensor tensor;
  const auto& name = require(header, "name");
  if (!name.is_string()) throw IntegrityError("tensor header field \"name\" must be a string");
  tensor.name = name.get<std::string>();
  require_string(header, "dtype", "f32");
  require_string(header, "order", "row-major");
  require_string(header, "endian", "little");

  const auto& shape = require(header, "shape");
  if (!shape.is_array()) throw IntegrityError("tensor header field \"shape\" must be an array");
  for (const auto& dim : shape) {
    if (!dim.is_number_unsigned()) {
      throw IntegrityError("tensor shape entries must be non-negative integers");
    }
    tensor.shape.push_back(dim.get<std::size_t>());
  }

  const std::size_t count = product(tensor.shape);
  const std::string_view payload = bytes.substr(newline + 1);
  if (count > std::numeric_limits<std::size_t>::max() / 4 || payload.size() != 4 * count) {
    throw IntegrityError("tensor \"" + tensor.name + "\" payload is " +
                         std::to_string(payload.size()) + " bytes, shape requires " +
                         std::to_string(4 * count));
  }
  tensor.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    tensor.data[i] = std::bit_cast<float>(get_le32(payload.data() + 4 * i));
  }
  return tensor;
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
  const std::string bytes = encode_tensor(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write tensor file " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tensor file " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  try {
    return decode_tensor(bytes);
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  }
}

Tensor tensor_from_matrix(std::string name, const Matrix& m) {
  Tensor t{std::move(name), {m.rows(), m.cols()}, {}};
  t.data.reserve(m.size());
  for (double v : m.values()) t.data.push_back(static_cast<float>(v));
  return t;
}

Tensor tensor_from_vector(std::string name, std::span<const double> v) {
  Tensor t{std::move(name), {v.size()}, {}};
  t.data.reserve(v.size());
  for (double x : v) t.data.push_back(static_cast<float>(x));
  return t;
}

Matrix matrix_from_tensor(const Tensor& t) {
  if (t.shape.size() != 2) {
    throw IntegrityError("tensor \"" + t.name + "\" has rank " + std::to_string(t.shape.size()) +
                         ", expected a matrix");
  }
  Matrix m(t.shape[0], t.shape[1]);
  auto out = m.values();
  for (std::size_t i = 0; i < t.data.size(); ++i) out[i] = t.data[i];
  return m;
}

std::vector<double> vector_from_tensor(const Tensor& t) {
  if (t.shape.size() != 1) {
    throw IntegrityError("tensor \"" + t.name + "\" has rank " + std::to_string(t.shape.size()) +
                         ", expected a vector");
  }
  return {t.data.begin(), t.data.end()};
}

}  // namespace slascore
