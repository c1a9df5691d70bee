// Copyright 2026 The ccmabeam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CCMA_ERROR_HPP
#define CCMA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ccma {

/// Invalid argument or configuration value. Maps to CLI exit code 1.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vector/matrix sizes that do not agree with the array geometry.
class DimensionError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Config or file content that fails validation; carries the offending field.
class ValidationError : public ArgumentError {
 public:
  ValidationError(std::string field, const std::string& message)
      : ArgumentError(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Numerical failure during evaluation or optimization. Maps to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Math domain violation inside the autodiff engine (log of non-positive, ...).
class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Filter whose weighted coefficients all vanish, so it cannot be normalized.
class DegenerateFilterError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ccma

#endif  // CCMA_ERROR_HPP
