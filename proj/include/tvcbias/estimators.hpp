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
#include <span>
#include <vector>

#include "tvcbias/policy.hpp"
#include "tvcbias/random_stream.hpp"
#include "tvcbias/sir.hpp"

namespace tvc {

// Which replicates feed the per-time means E[Y_t | ...].
enum class Conditioning {
  // Only replicates whose whole treatment path equals the target, at every t.
  kFullPath,
  // At time t, replicates whose first t treatments equal the target's.
  kPerTime,
};

struct EstimatorOptions {
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  Conditioning conditioning = Conditioning::kFullPath;
};

struct EstimateResult {
  // Mean and standard error of Y_T over retained replicates.
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replicates_total = 0;
  std::size_t replicates_retained = 0;
  // Indexed t = 0..T. Entry 0 is the initial outcome I0 / N.
  std::vector<double> per_time_means;
  std::vector<std::size_t> per_time_retained;
  // Entry d (1..T) counts replicates whose first treatment mismatch was a_d.
  std::vector<std::size_t> divergence_histogram;
};

struct BiasReport {
  // NaN when the rule has no threshold.
  double threshold = 0.0;
  EstimateResult causal;
  EstimateResult associational;
  // associational.mean - causal.mean
  double bias = 0.0;
  // Indexed t = 0..T: associational minus causal per-time mean.
  std::vector<double> bias_evolution;
};

// Seed domains used to split a master seed between sub-computations.
inline constexpr std::uint64_t kCausalDomain = 1;
inline constexpr std::uint64_t kAssociationalDomain = 2;
inline constexpr std::uint64_t kPolicyDomain = 3;

// Simulates one epidemic, letting `rule` pick each treatment. Outcome noise
// comes from `outcome_rng`; randomised rules draw from `policy_rng`.
Trajectory simulate_trajectory(const SirParams& params, const PolicyRule& rule,
                               RandomStream& outcome_rng,
                               RandomStream& policy_rng);

// E[Y_T^a] by forward simulation under do(a): every replicate follows
// `sequence` and is retained.
EstimateResult estimate_causal(const SirParams& params,
                               std::span<const Treatment> sequence,
                               std::size_t replicates,
                               std::uint64_t master_seed,
                               const EstimatorOptions& options = {});

// E[Y_T | A = target] by rejection: replicates run under `rule` and only
// those whose realised treatments equal `target` are kept. Throws
// EmptyConditioningError if none are.
EstimateResult estimate_associational(const SirParams& params,
                                      const PolicyRule& rule,
                                      std::span<const Treatment> target,
                                      std::size_t replicates,
                                      std::uint64_t master_seed,
                                      const EstimatorOptions& options = {});

// Runs both estimators on independent sub-seeds of `master_seed`.
BiasReport compute_bias_report(const SirParams& params, const PolicyRule& rule,
                               std::span<const Treatment> target,
                               std::size_t replicates,
                               std::uint64_t master_seed,
                               const EstimatorOptions& options = {});

BiasReport assemble_bias_report(double threshold, EstimateResult causal,
                                EstimateResult associational);

}  // namespace tvc
