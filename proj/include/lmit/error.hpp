// Copyright 2026 The lindblad-mitigation Authors
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

#ifndef LMIT_ERROR_HPP
#define LMIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lmit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category, used by the CLI error records.
  [[nodiscard]] virtual const char* kind() const noexcept { return "error"; }
};

/// Operator dimensions or tensor layouts do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "dimension"; }
};

/// An argument violates a documented precondition.
class ValueError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "value"; }
};

/// Integration failed (step budget exhausted, NaN/Inf encountered).
class IntegrationError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "integration"; }
};

/// The ratio estimator cannot be formed because its denominator vanished.
class UnrecoverableExponent : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "unrecoverable_exponent"; }
};

/// Malformed configuration or serialized document.
class ConfigError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] const char* kind() const noexcept override { return "config"; }
};

}  // namespace lmit

#endif  // LMIT_ERROR_HPP
