// Copyright 2026 The soilmap authors.
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

#ifndef SOILMAP_ERROR_HPP
#define SOILMAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace soilmap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad inputs: argument preconditions, file schemas, config validation.
/// The CLI maps this family to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfBounds : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InsufficientData : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotFound : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Failures while computing or writing results. Exit code 2 in the CLI.
class RuntimeError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

class GenerationError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

class UndefinedCorrelation : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

class Exhausted : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

class IoError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

}  // namespace soilmap

#endif  // SOILMAP_ERROR_HPP
