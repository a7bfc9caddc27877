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

#include "tvcbias/error.hpp"

#include <sstream>

namespace tvc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSpec: return "invalid-spec";
    case ErrorCode::kMalformedHistory: return "malformed-history";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kEmptyConditioning: return "empty-conditioning";
    case ErrorCode::kInstanceTooLarge: return "instance-too-large";
    case ErrorCode::kUndefinedConditional: return "undefined-conditional";
    case ErrorCode::kUndefinedRatio: return "undefined-ratio";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {

std::string describe_empty(std::size_t total,
                           const std::vector<std::size_t>& histogram) {
  std::ostringstream os;
  os << "no replicate matched the target treatment path (" << total
     << " simulated); first divergence at step:";
  for (std::size_t d = 1; d < histogram.size(); ++d) {
    if (histogram[d] != 0) os << ' ' << d << '=' << histogram[d];
  }
  return os.str();
}

}  // namespace

EmptyConditioningError::EmptyConditioningError(
    std::size_t total, std::vector<std::size_t> divergence_histogram)
    : Error(ErrorCode::kEmptyConditioning,
            describe_empty(total, divergence_histogram)),
      total_(total),
      histogram_(std::move(divergence_histogram)) {}

}  // namespace tvc
