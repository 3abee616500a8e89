// Copyright 2026 The ufls Authors
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

#ifndef UFLS_ERROR_HPP
#define UFLS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ufls {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented invariant or precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. The message carries the line or field location.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A size guard was exceeded (player count, factorial enumeration).
class CapacityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The requested shedding cannot be realised with the available load.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ufls

#endif  // UFLS_ERROR_HPP
