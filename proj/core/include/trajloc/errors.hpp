// core/include/trajloc/errors.hpp

// Copyright 2026  The trajloc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trajloc {

// Bad option values, malformed config files, missing keys.  CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data: malformed files, dataset mismatches, out-of-domain
// arguments.  CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed binary file; carries the byte offset where parsing failed.
class FormatError : public DataError {
 public:
  FormatError(const std::string& msg, std::uint64_t offset)
      : DataError(msg + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

// Tensor/layer shape mismatch; message names the offending layer or tensor.
class DimError : public DataError {
 public:
  explicit DimError(const std::string& msg) : DataError(msg) {}
};

// Training diverged or hit a numeric failure (NaN gradients, zero-norm
// embeddings).  CLI exit code 4.
class TrainError : public std::runtime_error {
 public:
  explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace trajloc
