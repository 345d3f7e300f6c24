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

#ifndef SLASCORE_ERROR_HPP_
#define SLASCORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace slascore {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unsupported container or sample format (rate, channels, bit depth).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Unreadable, unwritable or truncated file.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value or missing configuration asset.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A keyed record (tensor, transcript, utterance) could not be found.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Stored data is malformed: bad tensor header, short payload, wrong shape.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// In-memory operands have incompatible dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid data value such as an out-of-range score or a duplicate id.
class DataError : public Error {
 public:
  using Error::Error;
};

// Reduction over an empty set.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Cosine similarity of a zero-norm vector.
class DegenerateVectorError : public Error {
 public:
  using Error::Error;
};

}  // namespace slascore

#endif  // SLASCORE_ERROR_HPP_
