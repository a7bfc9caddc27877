// Copyright 2026 The tvcbias Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvc {

enum class ErrorCode {
  kInvalidSpec,
  kMalformedHistory,
  kOutOfRange,
  kEmptyConditioning,
  kInstanceTooLarge,
  kUndefinedConditional,
  kUndefinedRatio,
  kValidation,
  kConfig,
  kIo,
};

const char* to_string(ErrorCode code);

// Base exception for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when rejection conditioning keeps no replicate. Carries enough to
// see where the trajectories left the target path.
class EmptyConditioningError : public Error {
 public:
  EmptyConditioningError(std::size_t total,
                         std::vector<std::size_t> divergence_histogram);

  std::size_t replicates_total() const noexcept { return total_; }
  // Entry d counts replicates whose first mismatch with the target happened
  // at step d (1..T). Entry 0 is unused.
  const std::vector<std::size_t>& divergence_histogram() const noexcept {
    return histogram_;
  }

 private:
  std::size_t total_;
  std::vector<std::size_t> histogram_;
};

}  // namespace tvc
