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
#include <optional>
#include <string>
#include <vector>

#include "tvcbias/estimators.hpp"
#include "tvcbias/experiment_config.hpp"
#include "tvcbias/instances.hpp"
#include "tvcbias/oracle.hpp"
#include "tvcbias/sir.hpp"

namespace tvc {

inline constexpr const char* kEvolutionHeader =
    "threshold,t,causal_mean,associational_mean,bias";
inline constexpr const char* kSummaryHeader =
    "threshold,causal_T,associational_T,bias_T,retained,total";

// --- Figure 2: one epidemic without intervention -------------------------

// Replicate 0 of the causal stream, so the trajectory is one of the paths
// averaged by figures34.
Trajectory simulate_reference_trajectory(const ExperimentConfig& config);

std::string figure2_csv(const Trajectory& trajectory, const SirParams& params);
std::string figure2_svg(const Trajectory& trajectory, const SirParams& params);

// Writes figure2.csv and figure2.svg under config.output_dir.
Trajectory run_figure2(const ExperimentConfig& config);

// --- Figures 3 and 4: bias against the threshold -------------------------

struct ThresholdResult {
  double threshold = 0.0;
  // Empty when no replicate followed the all-zeros path.
  std::optional<EstimateResult> associational;
  std::vector<std::size_t> divergence_histogram;
};

struct Figures34Result {
  EstimateResult causal;
  std::vector<ThresholdResult> thresholds;

  std::size_t empty_count() const;
  bool all_empty() const { return empty_count() == thresholds.size(); }
  // NaN for an empty threshold.
  double bias_at(std::size_t k) const;
};

// The causal estimate is computed once; every threshold then reuses the
// same associational stream.
Figures34Result compute_figures34(const ExperimentConfig& config);

std::string evolution_csv(const Figures34Result& result);
std::string summary_csv(const Figures34Result& result);
std::string figure3_svg(const Figures34Result& result);
std::string figure4_svg(const Figures34Result& result);

// Writes bias_evolution.csv, bias_summary.csv, figure3.svg, figure4.svg.
Figures34Result run_figures34(const ExperimentConfig& config);

// --- Finite oracle front end ---------------------------------------------

struct OracleSuiteResult {
  std::string name;
  oracle::TheoremVerdict verdict;
  double associational_by_ratios = 0.0;
  oracle::OpportunismReport opportunism;
  bool monotone_process = false;
  std::string summary_csv;
  std::string ratios_csv;
  std::string opportunism_csv;
  std::string summary_text;
};

OracleSuiteResult evaluate_oracle(const oracle::OracleInstance& instance);

// Writes <name>_summary.csv, <name>_ratios.csv, <name>_opportunism.csv and
// <name>_summary.txt under output_dir.
OracleSuiteResult run_oracle_suite(const oracle::OracleInstance& instance,
                                   const std::string& output_dir);

// Writes fuzz_theorem.csv (one row per instance) under output_dir.
oracle::FuzzSummary run_fuzz_theorem(std::uint64_t seed, std::size_t count,
                                     const std::string& output_dir);

}  // namespace tvc
