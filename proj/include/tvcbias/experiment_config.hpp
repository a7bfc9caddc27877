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
#include <string>
#include <vector>

#include "tvcbias/estimators.hpp"
#include "tvcbias/sir.hpp"

namespace tvc {

// Everything a batch run needs. Defaults reproduce the reference scenario.
struct ExperimentConfig {
  SirParams sir;
  std::vector<double> thresholds{0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  std::size_t replicates = 100'000;
  std::uint64_t seed = 20240527;
  std::string output_dir = "out";
  Conditioning conditioning = Conditioning::kFullPath;
  // Not part of the results: runs are identical for any thread count.
  unsigned threads = 0;
};

// Throws Error(kConfig) describing the first invalid field.
void validate(const ExperimentConfig& config);

// Config files are INI-style:
//
//   [sir]
//   population = 1000000
//   initial_infected = 200
//   beta = 0.2857142857142857
//   gamma = 0.14285714285714285
//   lambda = -0.2
//   overdispersion = 500
//   horizon = 100
//
//   [experiment]
//   thresholds = 0.05,0.1,0.15,0.2,0.25,0.3
//   replicates = 100000
//   seed = 20240527
//   out = out
//   conditioning = full-path      ; or per-time
//   threads = 0
//
// Every key is optional. Unknown sections or keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Sets one "section.key" (e.g. "sir.beta", "experiment.seed").
// Throws Error(kConfig) on unknown keys or unparsable values.
void set_config_value(ExperimentConfig& config, const std::string& key,
                      const std::string& value);

// Inverse of parse_config; doubles are written with 17 significant digits
// so the round trip is exact.
std::string serialize_config(const ExperimentConfig& config);

std::string to_string(Conditioning conditioning);

}  // namespace tvc
