// Copyright 2026 The radarprop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RADARPROP_ERROR_HPP_
#define RADARPROP_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radarprop {

/// Base for errors raised while reading or validating input files. `line()`
/// is 1-based, or 0 when the error is not tied to a line.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Malformed JSON or a missing/mistyped field.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

/// Well-formed input that breaks a domain invariant.
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

/// A frame references a calibration the sidecar does not define.
class MissingCalibrationError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace radarprop

#endif  // RADARPROP_ERROR_HPP_
