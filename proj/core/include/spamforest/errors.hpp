/*
 * Copyright 2026 The spamforest Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPAMFOREST_ERRORS_HPP_
#define SPAMFOREST_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spamforest {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor or record dimensions do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A value violates an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Hyperparameters or run configuration are inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf reached a loss or gradient.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Input statistics too degenerate for the requested test.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

// A serialized artifact is truncated or fails its checksum.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

// I/O failure on a named path.
class FileError : public Error {
 public:
  using Error::Error;
};

}  // namespace spamforest

#endif  // SPAMFOREST_ERRORS_HPP_
