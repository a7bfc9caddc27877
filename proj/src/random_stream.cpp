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

#include "tvcbias/random_stream.hpp"

namespace tvc {

namespace {

constexpr std::uint32_t lo32(std::uint64_t v) {
  return static_cast<std::uint32_t>(v & 0xffffffffu);
}
constexpr std::uint32_t hi32(std::uint64_t v) {
  return static_cast<std::uint32_t>(v >> 32);
}

// Tag keeps replicate seeding disjoint from subseed derivation.
constexpr std::uint32_t kReplicateTag = 0x7265706cu;
constexpr std::uint32_t kSubseedTag = 0x73756273u;

}  // namespace

RandomStream derive_replicate_stream(std::uint64_t master_seed,
                                     std::uint64_t replicate_index) {
  std::seed_seq seq{kReplicateTag, lo32(master_seed), hi32(master_seed),
                    lo32(replicate_index), hi32(replicate_index)};
  return RandomStream(seq);
}

std::uint64_t derive_subseed(std::uint64_t master_seed, std::uint64_t domain) {
  std::seed_seq seq{kSubseedTag, lo32(master_seed), hi32(master_seed),
                    lo32(domain), hi32(domain)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

}  // namespace tvc
