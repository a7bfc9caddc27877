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

#include "tvcbias/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvcbias/error.hpp"

namespace tvc::oracle {

namespace {

constexpr double kOrderTolerance = 1e-12;

double int_pow(std::size_t base, int exponent) {
  double r = 1.0;
  for (int k = 0; k < exponent; ++k) r *= static_cast<double>(base);
  return r;
}

void check_cap(const FiniteDgp& dgp, std::uint64_t cap) {
  const double paths = int_pow(dgp.num_outcomes(), dgp.horizon()) *
                       int_pow(dgp.num_treatments(), dgp.horizon());
  if (paths > static_cast<double>(cap)) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "|Y|^T * |A|^T exceeds the enumeration cap");
  }
}

void check_target(const FiniteDgp& dgp, std::span<const Index> target) {
  if (target.size() != static_cast<std::size_t>(dgp.horizon())) {
    throw Error(ErrorCode::kInvalidSpec,
                "target length differs from the horizon");
  }
  for (Index a : target) {
    if (a >= dgp.num_treatments()) {
      throw Error(ErrorCode::kOutOfRange, "target treatment out of range");
    }
  }
}

// Checks treatments = a_1..a_t, outcomes of length t - drop, and
// t + |future| = T. Returns t.
int check_split(const FiniteDgp& dgp, std::span<const Index> future,
                std::span<const Index> treatments,
                std::span<const Index> outcomes, std::size_t drop) {
  const auto t = treatments.size();
  if (t < 1 || t + future.size() != static_cast<std::size_t>(dgp.horizon()) ||
      outcomes.size() + drop != t) {
    throw Error(ErrorCode::kMalformedHistory,
                "history and future do not split the horizon: " +
                    describe_history(static_cast<int>(t), treatments,
                                     outcomes));
  }
  return static_cast<int>(t);
}

// p(future[k..] | a, y) where |a| == |y|. Kernels only.
double future_probability(const FiniteDgp& dgp, IndexPath& a, IndexPath& y,
                          std::span<const Index> future, std::size_t k) {
  if (k == future.size()) return 1.0;
  const int t = static_cast<int>(a.size());
  const double pi = dgp.rule_row(t, a, y)[future[k]];
  if (pi == 0.0) return 0.0;
  a.push_back(future[k]);
  const auto row = dgp.outcome_row(t + 1, a, y);
  double sum = 0.0;
  for (Index next = 0; next < row.size(); ++next) {
    if (row[next] == 0.0) continue;
    y.push_back(next);
    sum += row[next] * future_probability(dgp, a, y, future, k + 1);
    y.pop_back();
  }
  a.pop_back();
  return pi * sum;
}

// E[Y_T | a, y, remaining treatments forced to future[k..]], |a| == |y|.
double expected_final(const FiniteDgp& dgp, IndexPath& a, IndexPath& y,
                      std::span<const Index> future, std::size_t k) {
  if (k == future.size()) return dgp.outcome_value(y.back());
  a.push_back(future[k]);
  const auto row = dgp.outcome_row(static_cast<int>(a.size()), a, y);
  double sum = 0.0;
  for (Index next = 0; next < row.size(); ++next) {
    if (row[next] == 0.0) continue;
    y.push_back(next);
    sum += row[next] * expected_final(dgp, a, y, future, k + 1);
    y.pop_back();
  }
  a.pop_back();
  return sum;
}

// Lag-1 propensity without reachability checks: sum over y_t of
// p_t(y_t | a, y) * p(future | a, y + y_t).
double lag1_unchecked(const FiniteDgp& dgp, IndexPath& a, IndexPath& y,
                      std::span<const Index> future) {
  const auto row = dgp.outcome_row(static_cast<int>(a.size()), a, y);
  double sum = 0.0;
  for (Index next = 0; next < row.size(); ++next) {
    if (row[next] == 0.0) continue;
    y.push_back(next);
    sum += row[next] * future_probability(dgp, a, y, future, 0);
    y.pop_back();
  }
  return sum;
}

void enumerate(const FiniteDgp& dgp, IndexPath& a, IndexPath& y, double prob,
               std::vector<PathProbability>& out) {
  const int t = static_cast<int>(a.size());
  if (t == dgp.horizon()) {
    out.push_back({a, y, prob});
    return;
  }
  const auto rule = dgp.rule_row(t, a, y);
  for (Index act = 0; act < rule.size(); ++act) {
    if (rule[act] == 0.0) continue;
    a.push_back(act);
    const auto row = dgp.outcome_row(t + 1, a, y);
    for (Index next = 0; next < row.size(); ++next) {
      if (row[next] == 0.0) continue;
      y.push_back(next);
      enumerate(dgp, a, y, prob * rule[act] * row[next], out);
      y.pop_back();
    }
    a.pop_back();
  }
}

// Advances an odometer over `digits`-ary sequences; false after the last.
bool next_sequence(IndexPath& seq, std::size_t digits) {
  for (std::size_t k = seq.size(); k-- > 0;) {
    if (++seq[k] < digits) return true;
    seq[k] = 0;
  }
  return false;
}

void ratios_recurse(const FiniteDgp& dgp, std::span<const Index> target,
                    IndexPath& a, IndexPath& y, double weight, double& total) {
  const int t = static_cast<int>(y.size()) + 1;  // next outcome index
  a.push_back(target[static_cast<std::size_t>(t - 1)]);
  const auto row = dgp.outcome_row(t, a, y);
  if (t == dgp.horizon()) {
    double final_mean = 0.0;
    for (Index next = 0; next < row.size(); ++next) {
      final_mean += row[next] * dgp.outcome_value(next);
    }
    total += weight * final_mean;
    a.pop_back();
    return;
  }
  const auto future = target.subspan(static_cast<std::size_t>(t));
  const double lag1 = lag1_unchecked(dgp, a, y, future);
  if (lag1 == 0.0) {
    throw Error(ErrorCode::kUndefinedRatio,
                "lag-1 propensity vanished on a path with positive weight");
  }
  for (Index next = 0; next < row.size(); ++next) {
    if (row[next] == 0.0) continue;
    y.push_back(next);
    const double ratio = future_probability(dgp, a, y, future, 0) / lag1;
    if (ratio > 0.0) {
      ratios_recurse(dgp, target, a, y, weight * ratio * row[next], total);
    }
    y.pop_back();
  }
  a.pop_back();
}

}  // namespace

std::vector<PathProbability> enumerate_paths(const FiniteDgp& dgp,
                                             std::uint64_t cap) {
  check_cap(dgp, cap);
  std::vector<PathProbability> out;
  IndexPath a, y;
  enumerate(dgp, a, y, 1.0, out);
  return out;
}

double history_probability(const FiniteDgp& dgp,
                           std::span<const Index> treatments,
                           std::span<const Index> outcomes) {
  const std::size_t k = treatments.size();
  const std::size_t j = outcomes.size();
  if (!(k == j || k == j + 1) || k > static_cast<std::size_t>(dgp.horizon())) {
    throw Error(ErrorCode::kMalformedHistory,
                "history lengths are not aligned: " +
                    describe_history(static_cast<int>(k), treatments,
                                     outcomes));
  }
  double prob = 1.0;
  for (std::size_t s = 0; s < k && prob > 0.0; ++s) {
    prob *= dgp.rule_row(static_cast<int>(s), treatments.first(s),
                         outcomes.first(s))[treatments[s]];
    if (s < j && prob > 0.0) {
      prob *= dgp.outcome_row(static_cast<int>(s + 1), treatments.first(s + 1),
                              outcomes.first(s))[outcomes[s]];
    }
  }
  return prob;
}

double g_formula_exact(const FiniteDgp& dgp, std::span<const Index> target) {
  check_target(dgp, target);
  IndexPath a, y;
  return expected_final(dgp, a, y, target, 0);
}

double associational_exact(const FiniteDgp& dgp,
                           std::span<const Index> target) {
  check_target(dgp, target);
  double mass = 0.0;
  double weighted = 0.0;
  for (const auto& path : enumerate_paths(dgp)) {
    if (!std::equal(path.treatments.begin(), path.treatments.end(),
                    target.begin())) {
      continue;
    }
    mass += path.probability;
    weighted += path.probability * dgp.outcome_value(path.outcomes.back());
  }
  if (mass == 0.0) {
    throw Error(ErrorCode::kUndefinedConditional,
                "target treatment path has probability zero");
  }
  return weighted / mass;
}

double associational_by_ratios(const FiniteDgp& dgp,
                               std::span<const Index> target) {
  check_target(dgp, target);
  IndexPath a, y;
  const double first = dgp.rule_row(0, a, y)[target[0]];
  double path_mass = first;
  if (first > 0.0 && dgp.horizon() > 1) {
    a.push_back(target[0]);
    path_mass *= lag1_unchecked(dgp, a, y, target.subspan(1));
    a.clear();
  }
  if (path_mass == 0.0) {
    throw Error(ErrorCode::kUndefinedConditional,
                "target treatment path has probability zero");
  }
  double total = 0.0;
  ratios_recurse(dgp, target, a, y, 1.0, total);
  return total;
}

double prospective_propensity(const FiniteDgp& dgp, Lag lag,
                              std::span<const Index> future,
                              std::span<const Index> treatments,
                              std::span<const Index> outcomes) {
  check_split(dgp, future, treatments, outcomes, lag == Lag::kZero ? 0 : 1);
  if (history_probability(dgp, treatments, outcomes) == 0.0) {
    throw Error(ErrorCode::kUndefinedConditional,
                "conditioning history has probability zero: " +
                    describe_history(static_cast<int>(treatments.size()),
                                     treatments, outcomes));
  }
  IndexPath a(treatments.begin(), treatments.end());
  IndexPath y(outcomes.begin(), outcomes.end());
  if (lag == Lag::kZero) return future_probability(dgp, a, y, future, 0);
  return lag1_unchecked(dgp, a, y, future);
}

double adaptive_ratio(const FiniteDgp& dgp, std::span<const Index> future,
                      std::span<const Index> treatments,
                      std::span<const Index> outcomes, Index y_t) {
  double lag1 = 0.0;
  try {
    lag1 = prospective_propensity(dgp, Lag::kOne, future, treatments,
                                  outcomes);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefinedConditional) throw;
    throw Error(ErrorCode::kUndefinedRatio, e.what());
  }
  if (lag1 == 0.0) {
    throw Error(ErrorCode::kUndefinedRatio,
                "lag-1 propensity is zero at " +
                    describe_history(static_cast<int>(treatments.size()),
                                     treatments, outcomes));
  }
  IndexPath y(outcomes.begin(), outcomes.end());
  y.push_back(y_t);
  return prospective_propensity(dgp, Lag::kZero, future, treatments, y) / lag1;
}

AdaptationPartition classify_adaptations(const FiniteDgp& dgp,
                                         std::span<const Index> future,
                                         std::span<const Index> treatments,
                                         std::span<const Index> outcomes) {
  const int t = check_split(dgp, future, treatments, outcomes, 1);
  const auto row = dgp.outcome_row(t, treatments, outcomes);
  AdaptationPartition part;
  for (Index y_t = 0; y_t < row.size(); ++y_t) {
    if (row[y_t] == 0.0) continue;
    const double s = adaptive_ratio(dgp, future, treatments, outcomes, y_t);
    part.ratios[y_t] = s;
    part.probabilities[y_t] = row[y_t];
    if (std::abs(s - 1.0) <= kNeutralTolerance) {
      part.neutral.push_back(y_t);
    } else if (s > 1.0) {
      part.upweighted.push_back(y_t);
    } else {
      part.downweighted.push_back(y_t);
    }
  }
  return part;
}

double moving_marginal_expectation(const FiniteDgp& dgp, Index y_t,
                                   std::span<const Index> future,
                                   std::span<const Index> treatments,
                                   std::span<const Index> outcomes) {
  check_split(dgp, future, treatments, outcomes, 1);
  if (y_t >= dgp.num_outcomes()) {
    throw Error(ErrorCode::kOutOfRange, "outcome index out of range");
  }
  IndexPath a(treatments.begin(), treatments.end());
  IndexPath y(outcomes.begin(), outcomes.end());
  y.push_back(y_t);
  return expected_final(dgp, a, y, future, 0);
}

bool OpportunismReport::opportunistic_everywhere() const {
  bool any = false;
  for (const auto& v : times) {
    if (!v.nonconstant_ratio) continue;
    any = true;
    if (!v.opportunistic) return false;
  }
  return any;
}

OpportunismReport check_opportunistic(const FiniteDgp& dgp,
                                      std::span<const Index> target) {
  check_target(dgp, target);
  OpportunismReport report;
  const int horizon = dgp.horizon();
  for (int t = 1; t < horizon; ++t) {
    TimeVerdict verdict;
    verdict.t = t;
    const auto treatments = target.first(static_cast<std::size_t>(t));
    const auto future = target.subspan(static_cast<std::size_t>(t));
    bool all_ii = true;
    double margin = std::numeric_limits<double>::infinity();

    IndexPath history(static_cast<std::size_t>(t - 1), 0);
    do {
      if (history_probability(dgp, treatments, history) == 0.0 ||
          prospective_propensity(dgp, Lag::kOne, future, treatments,
                                 history) == 0.0) {
        ++verdict.histories_skipped;
        continue;
      }
      ++verdict.histories_checked;
      const AdaptationPartition part =
          classify_adaptations(dgp, future, treatments, history);
      if (!part.nonconstant()) continue;
      verdict.nonconstant_ratio = true;

      auto f = [&](Index y_t) {
        return moving_marginal_expectation(dgp, y_t, future, treatments,
                                           history);
      };
      double inf_low = std::numeric_limits<double>::infinity();
      for (Index y_t : part.downweighted) inf_low = std::min(inf_low, f(y_t));
      double sup_up = -std::numeric_limits<double>::infinity();
      for (Index y_t : part.upweighted) sup_up = std::max(sup_up, f(y_t));
      // Vacuous when either side is empty.
      if (!(inf_low >= sup_up - kOrderTolerance)) verdict.condition_i = false;

      // Condition (ii) with a strictly positive margin. Singletons suffice:
      // a larger set can only lower the infimum of its separations.
      double best_m = 0.0;
      bool has_mass = false;
      for (const auto* side : {&part.downweighted, &part.upweighted}) {
        for (Index y_t : *side) {
          const double w = std::abs(1.0 - part.ratios.at(y_t)) *
                           part.probabilities.at(y_t);
          if (w <= 0.0) continue;
          has_mass = true;
          if (!part.downweighted.empty()) {
            best_m = std::max(best_m, std::abs(f(y_t) - inf_low));
          }
        }
      }
      if (!has_mass || !(best_m > kOrderTolerance)) all_ii = false;
      margin = std::min(margin, best_m);
    } while (next_sequence(history, dgp.num_outcomes()));

    verdict.condition_ii = verdict.nonconstant_ratio && all_ii;
    verdict.margin = verdict.nonconstant_ratio ? margin : 0.0;
    verdict.opportunistic = verdict.nonconstant_ratio &&
                            verdict.condition_i && verdict.condition_ii;
    report.times.push_back(verdict);
  }
  return report;
}

bool check_monotone_process(const FiniteDgp& dgp) {
  const int horizon = dgp.horizon();
  for (int t = 1; t < horizon; ++t) {
    IndexPath treatments(static_cast<std::size_t>(t), 0);
    do {
      IndexPath history(static_cast<std::size_t>(t - 1), 0);
      do {
        // Reachability under the forced treatments: product of outcome
        // kernels along the history.
        double reach = 1.0;
        for (int s = 1; s < t && reach > 0.0; ++s) {
          const auto us = static_cast<std::size_t>(s);
          reach *= dgp.outcome_row(s, std::span(treatments).first(us),
                                   std::span(history).first(us - 1))
                       [history[us - 1]];
        }
        if (reach == 0.0) continue;
        const auto row = dgp.outcome_row(t, treatments, history);
        IndexPath future(static_cast<std::size_t>(horizon - t), 0);
        do {
          double previous = -std::numeric_limits<double>::infinity();
          for (Index y_t = 0; y_t < row.size(); ++y_t) {
            if (row[y_t] == 0.0) continue;
            const double f = moving_marginal_expectation(dgp, y_t, future,
                                                         treatments, history);
            if (f < previous - kOrderTolerance) return false;
            previous = std::max(previous, f);
          }
        } while (next_sequence(future, dgp.num_treatments()));
      } while (next_sequence(history, dgp.num_outcomes()));
    } while (next_sequence(treatments, dgp.num_treatments()));
  }
  return true;
}

TheoremVerdict verify_theorem1(const FiniteDgp& dgp,
                               std::span<const Index> target) {
  TheoremVerdict v;
  v.g_formula = g_formula_exact(dgp, target);
  v.associational = associational_exact(dgp, target);
  v.bias = v.associational - v.g_formula;
  const OpportunismReport report = check_opportunistic(dgp, target);
  v.opportunistic_everywhere = report.opportunistic_everywhere();
  v.theorem_respected = !v.opportunistic_everywhere || v.bias < 0.0;
  return v;
}

}  // namespace tvc::oracle
