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
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "tvcbias/finite_dgp.hpp"
#include "tvcbias/oracle.hpp"

namespace tvc::oracle {

// A finite DGP together with the treatment path to evaluate.
struct OracleInstance {
  FiniteDgp dgp;
  IndexPath target;
};

// "coin-epidemic": T = 2, Y_1 ~ Bernoulli(0.5) whatever a_1,
// Y_2 = Y_1 + Bernoulli(0.6 untreated / 0.3 treated), a_1 = 0, and
// P(A_2 = 1 | Y_1 = 0) = 0.2, P(A_2 = 1 | Y_1 = 1) = 1. Target (0, 0).
// "coin-epidemic-reversed": the rule swaps which Y_1 triggers treatment.
// "exogenous-null": P(A_2 = 1) = 0.2 regardless of Y_1.
OracleInstance builtin_instance(const std::string& name);
std::vector<std::string> builtin_names();
bool is_builtin(const std::string& name);

// JSON instance format:
//
//   {
//     "name": "...",
//     "horizon": 2,
//     "outcomes": [0, 1, 2],          // strictly increasing
//     "treatments": [0, 1],
//     "initial_outcome": 0,
//     "target": [0, 0],               // optional, default all first value
//     "outcome_kernels": [            // p_t(y_t | a_1..a_t, y_1..y_{t-1})
//       {"t": 1, "treatments": ["*"], "outcomes": [], "p": [0.5, 0.5, 0]}
//     ],
//     "rule_kernels": [               // pi_t(a_{t+1} | a_1..a_t, y_1..y_t)
//       {"t": 0, "treatments": [], "outcomes": [], "p": [1, 0]}
//     ]
//   }
//
// History entries are alphabet values; "*" expands to every value. Later
// rows override earlier ones. Throws Error(kValidation) naming the first
// offending row.
OracleInstance parse_instance_json(const std::string& text);
OracleInstance load_instance_file(const std::string& path);
// Built-in name if it is one, otherwise a file path.
OracleInstance load_instance(const std::string& name_or_path);

struct FuzzOptions {
  int min_horizon = 2;
  int max_horizon = 3;
  std::size_t min_outcomes = 2;
  std::size_t max_outcomes = 3;
  std::size_t treatments = 2;
  // Chance that a kernel entry is forced to zero before normalising.
  double zero_probability = 0.25;
};

// Random kernels on a random small alphabet; every row is defined.
FiniteDgp random_finite_dgp(std::mt19937_64& rng,
                            const FuzzOptions& options = {});

// Draws a treatment path from the joint law, so it has positive probability.
IndexPath sample_treatment_path(const FiniteDgp& dgp, std::mt19937_64& rng);

struct FuzzCase {
  OracleInstance instance;
  std::size_t attempts = 0;
};

// Rejection-samples (seed, index) until the drawn instance and target are
// opportunistic everywhere. Deterministic in (seed, index).
FuzzCase random_opportunistic_case(std::uint64_t seed, std::size_t index,
                                   const FuzzOptions& options = {},
                                   std::size_t max_attempts = 100'000);

struct FuzzRecord {
  std::size_t index = 0;
  int horizon = 0;
  std::size_t outcomes = 0;
  std::size_t attempts = 0;
  TheoremVerdict verdict;
};

struct FuzzSummary {
  std::size_t instances = 0;
  std::size_t respected = 0;
  std::size_t attempts = 0;
  double max_bias = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> violations;  // instance indices
  std::vector<FuzzRecord> records;
};

FuzzSummary fuzz_theorem(std::uint64_t seed, std::size_t count,
                         const FuzzOptions& options = {});

}  // namespace tvc::oracle
