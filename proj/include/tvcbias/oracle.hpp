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
#include <map>
#include <span>
#include <vector>

#include "tvcbias/finite_dgp.hpp"

// Exact quantities on a FiniteDgp by enumeration. Histories follow the
// FiniteDgp conventions: `treatments` is a_1..a_t, `outcomes` y_1..y_k, and
// `future` is a_{t+1}..a_T. Every argument is an alphabet index.
namespace tvc::oracle {

struct PathProbability {
  IndexPath treatments;
  IndexPath outcomes;
  double probability = 0.0;
};

// Every (a_1..a_T, y_1..y_T) with positive probability under the rule.
// Throws kInstanceTooLarge when |Y|^T * |A|^T > cap.
std::vector<PathProbability> enumerate_paths(const FiniteDgp& dgp,
                                             std::uint64_t cap =
                                                 kDefaultPathCap);

// P(A_1..A_k = treatments, Y_1..Y_j = outcomes) under the rule, for
// k == j or k == j + 1.
double history_probability(const FiniteDgp& dgp,
                           std::span<const Index> treatments,
                           std::span<const Index> outcomes);

// E[Y_T^a] through the outcome kernels only; the rule is ignored.
double g_formula_exact(const FiniteDgp& dgp, std::span<const Index> target);

// E[Y_T | A = target] from the joint law. Throws kUndefinedConditional if
// the target path has probability zero.
double associational_exact(const FiniteDgp& dgp, std::span<const Index> target);

// The same conditional expectation rebuilt as
//   sum over y_1..y_{T-1} of E[Y_T | a, y] * prod_t s_t(y_t) p_t(y_t | ...),
// i.e. from the causal kernels reweighted by adaptive propensity ratios.
double associational_by_ratios(const FiniteDgp& dgp,
                               std::span<const Index> target);

enum class Lag { kZero, kOne };

// p(future | treatments, outcomes) with outcomes = y_1..y_t for lag 0 and
// y_1..y_{t-1} for lag 1, where t = treatments.size(). An empty future
// gives 1. Throws kUndefinedConditional if the conditioning history has
// probability zero.
double prospective_propensity(const FiniteDgp& dgp, Lag lag,
                              std::span<const Index> future,
                              std::span<const Index> treatments,
                              std::span<const Index> outcomes);

// s_t(y_t) = lag-0 / lag-1 propensity. `outcomes` is y_1..y_{t-1}.
// Throws kUndefinedRatio when the lag-1 propensity is zero or its history
// is unreachable.
double adaptive_ratio(const FiniteDgp& dgp, std::span<const Index> future,
                      std::span<const Index> treatments,
                      std::span<const Index> outcomes, Index y_t);

inline constexpr double kNeutralTolerance = 1e-12;

struct AdaptationPartition {
  IndexPath upweighted;
  IndexPath neutral;
  IndexPath downweighted;
  std::map<Index, double> ratios;
  // p_t(y_t | history) for each supported y_t.
  std::map<Index, double> probabilities;

  bool nonconstant() const {
    return !upweighted.empty() || !downweighted.empty();
  }
};

// Splits the supported outcomes at time t by s_t > 1, == 1, < 1 (within
// kNeutralTolerance).
AdaptationPartition classify_adaptations(const FiniteDgp& dgp,
                                         std::span<const Index> future,
                                         std::span<const Index> treatments,
                                         std::span<const Index> outcomes);

// f_{T,t}(y_t): expected final outcome given the history, y_t, and the
// remaining treatments forced to `future`. `outcomes` is y_1..y_{t-1}.
double moving_marginal_expectation(const FiniteDgp& dgp, Index y_t,
                                   std::span<const Index> future,
                                   std::span<const Index> treatments,
                                   std::span<const Index> outcomes);

struct TimeVerdict {
  int t = 0;
  bool nonconstant_ratio = false;
  bool condition_i = true;
  bool condition_ii = false;
  bool opportunistic = false;
  // Smallest, over checked histories, of the best condition (ii) margin.
  double margin = 0.0;
  std::size_t histories_checked = 0;
  std::size_t histories_skipped = 0;
};

struct OpportunismReport {
  std::vector<TimeVerdict> times;  // t = 1..T-1

  // Opportunistic at every t whose ratio is not constant, and there is at
  // least one such t.
  bool opportunistic_everywhere() const;
};

OpportunismReport check_opportunistic(const FiniteDgp& dgp,
                                      std::span<const Index> target);

// True iff f_{T,t} is nondecreasing in y_t for every t < T, every history
// with positive probability under the forced treatments, and every future.
// Vacuously true for T = 1.
bool check_monotone_process(const FiniteDgp& dgp);

struct TheoremVerdict {
  double g_formula = 0.0;
  double associational = 0.0;
  double bias = 0.0;
  bool opportunistic_everywhere = false;
  bool theorem_respected = false;
};

TheoremVerdict verify_theorem1(const FiniteDgp& dgp,
                               std::span<const Index> target);

}  // namespace tvc::oracle
