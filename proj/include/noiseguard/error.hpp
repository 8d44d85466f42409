// Copyright 2026 The Noiseguard Authors.
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

#ifndef NOISEGUARD_ERROR_HPP_
#define NOISEGUARD_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace noiseguard {

// Error categories double as CLI exit codes.
enum class ErrorKind : int {
  kUsage = 2,
  kData = 3,
  kNumeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

// Malformed input, misaligned ids, violated invariants of loaded data.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

// Cholesky failure and other numerically degenerate fits.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::kNumeric, what) {}
};

// Bad arguments, and requests a provider cannot serve (e.g. re-encoding
// with a stored embedding provider).
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what)
      : Error(ErrorKind::kUsage, what) {}
};

class CapabilityError : public UsageError {
 public:
  explicit CapabilityError(const std::string& what) : UsageError(what) {}
};

}  // namespace noiseguard

#endif  // NOISEGUARD_ERROR_HPP_
