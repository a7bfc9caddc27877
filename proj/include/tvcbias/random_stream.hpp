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

#include <cstdint>
#include <random>

namespace tvc {

// A reproducible source of uniform variates owned by exactly one replicate.
class RandomStream {
 public:
  explicit RandomStream(std::seed_seq& seq) : engine_(seq) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// Pure function of (master_seed, replicate_index): the same pair always
// yields the same sequence, independently of which thread asks for it.
RandomStream derive_replicate_stream(std::uint64_t master_seed,
                                     std::uint64_t replicate_index);

// Derives a seed for a named sub-computation (causal run, associational run,
// policy draws, ...) so that sub-computations do not share streams.
std::uint64_t derive_subseed(std::uint64_t master_seed, std::uint64_t domain);

}  // namespace tvc
