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

#ifndef SLASCORE_TENSOR_IO_HPP_
#define SLASCORE_TENSOR_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slascore/matrix.hpp"

namespace slascore {

// An f32 tensor as stored in an interchange file.
//
// On disk: one UTF-8 JSON header line terminated by '\n',
//   {"name":...,"dtype":"f32","shape":[...],"order":"row-major","endian":"little"}
// followed by exactly product(shape) * 4 bytes of little-endian IEEE-754
// binary32 values in row-major order.
struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<float> data;

  std::size_t element_count() const;
  bool operator==(const Tensor&) const = default;
};

// Serialises header and payload. Throws ShapeError if data.size() does not
// match the shape.
std::string encode_tensor(const Tensor& tensor);

// Parses bytes produced by encode_tensor. Any header that is not valid JSON
// with the expected fields, or a payload whose length differs from the
// shape, raises IntegrityError.
Tensor decode_tensor(std::string_view bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& tensor);
// IoError if the file cannot be read, IntegrityError if it is malformed.
Tensor read_tensor(const std::filesystem::path& path);

// Conversions between the f32 interchange representation and compute types.
Tensor tensor_from_matrix(std::string name, const Matrix& m);
Tensor tensor_from_vector(std::string name, std::span<const double> v);
Matrix matrix_from_tensor(const Tensor& t);          // requires rank 2
std::vector<double> vector_from_tensor(const Tensor& t);  // requires rank 1

}  // namespace slascore

#endif  // SLASCORE_TENSOR_IO_HPP_
