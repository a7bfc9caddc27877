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

#include "tvcbias/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <variant>

#include "tvcbias/error.hpp"

namespace tvc {

namespace {

constexpr std::size_t kBlockSize = 256;

// Running count / mean / sum of squared deviations (Welford), combinable
// with Chan's update.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double total = na + nb;
    const double delta = other.mean - mean;
    mean += delta * nb / total;
    m2 += other.m2 + delta * delta * na * nb / total;
    n += other.n;
  }
};

struct BlockStats {
  std::vector<Moments> per_time;
  std::vector<std::size_t> divergence;

  BlockStats(std::size_t horizon)
      : per_time(horizon + 1), divergence(horizon + 1, 0) {}

  void merge(const BlockStats& other) {
    for (std::size_t t = 0; t < per_time.size(); ++t) {
      per_time[t].merge(other.per_time[t]);
    }
    for (std::size_t d = 0; d < divergence.size(); ++d) {
      divergence[d] += other.divergence[d];
    }
  }
};

void check_inputs(const SirParams& params, std::span<const Treatment> target,
                  std::size_t replicates) {
  validate(params);
  if (target.size() != static_cast<std::size_t>(params.horizon)) {
    throw Error(ErrorCode::kInvalidSpec,
                "target treatment path length differs from the horizon");
  }
  if (replicates < 1) {
    throw Error(ErrorCode::kInvalidSpec, "need at least one replicate");
  }
}

// Simulates replicates [first, last) and folds them in index order.
BlockStats run_block(const SirParams& params, const PolicyRule& rule,
                     std::span<const Treatment> target, std::uint64_t seed,
                     std::uint64_t policy_seed, Conditioning conditioning,
                     std::size_t first, std::size_t last) {
  const auto horizon = static_cast<std::size_t>(params.horizon);
  BlockStats stats(horizon);
  std::vector<Treatment> treatments;
  std::vector<double> outcomes;
  treatments.reserve(horizon);
  outcomes.reserve(horizon + 1);

  // Deterministic rules never read this; randomised ones get a fresh
  // per-replicate stream below.
  RandomStream policy_rng = derive_replicate_stream(policy_seed, first);
  const bool randomised = !rule.deterministic();

  for (std::size_t rep = first; rep < last; ++rep) {
    RandomStream rng = derive_replicate_stream(seed, rep);
    if (randomised) policy_rng = derive_replicate_stream(policy_seed, rep);
    treatments.clear();
    outcomes.clear();
    CompartmentState state = params.initial_state();
    outcomes.push_back(params.outcome(state));

    std::size_t diverged_at = 0;
    for (std::size_t t = 0; t < horizon; ++t) {
      const Treatment a =
          rule.decide(ObservedHistory{treatments, outcomes}, policy_rng);
      if (a != target[t]) {
        diverged_at = t + 1;
        break;
      }
      treatments.push_back(a);
      state = sir_step(state, params, a, rng);
      outcomes.push_back(params.outcome(state));
    }

    if (diverged_at != 0) {
      ++stats.divergence[diverged_at];
      if (conditioning == Conditioning::kPerTime) {
        // a_1..a_t matched for every t < diverged_at.
        for (std::size_t t = 0; t < diverged_at; ++t) {
          stats.per_time[t].add(outcomes[t]);
        }
      }
      continue;
    }
    for (std::size_t t = 0; t <= horizon; ++t) {
      stats.per_time[t].add(outcomes[t]);
    }
  }
  return stats;
}

// Pairwise reduction over blocks in index order; the tree shape depends only
// on the number of blocks.
BlockStats reduce_pairwise(std::vector<BlockStats>& blocks, std::size_t lo,
                           std::size_t hi) {
  if (hi - lo == 1) return std::move(blocks[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  BlockStats left = reduce_pairwise(blocks, lo, mid);
  left.merge(reduce_pairwise(blocks, mid, hi));
  return left;
}

EstimateResult run_estimator(const SirParams& params, const PolicyRule& rule,
                             std::span<const Treatment> target,
                             std::size_t replicates, std::uint64_t seed,
                             const EstimatorOptions& options) {
  check_inputs(params, target, replicates);
  const auto horizon = static_cast<std::size_t>(params.horizon);
  const std::uint64_t policy_seed = derive_subseed(seed, kPolicyDomain);
  const std::size_t n_blocks = (replicates + kBlockSize - 1) / kBlockSize;

  std::vector<BlockStats> blocks(n_blocks, BlockStats(horizon));
  unsigned threads = options.threads != 0
                         ? options.threads
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, n_blocks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      for (std::size_t b = next++; b < n_blocks && !failed; b = next++) {
        const std::size_t first = b * kBlockSize;
        const std::size_t last = std::min(replicates, first + kBlockSize);
        blocks[b] = run_block(params, rule, target, seed, policy_seed,
                              options.conditioning, first, last);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  BlockStats total = reduce_pairwise(blocks, 0, n_blocks);

  EstimateResult result;
  result.replicates_total = replicates;
  result.divergence_histogram = total.divergence;
  result.per_time_means.resize(horizon + 1);
  result.per_time_retained.resize(horizon + 1);
  for (std::size_t t = 0; t <= horizon; ++t) {
    const Moments& m = total.per_time[t];
    result.per_time_retained[t] = m.n;
    result.per_time_means[t] =
        m.n > 0 ? m.mean : std::numeric_limits<double>::quiet_NaN();
  }
  const Moments& final_moments = total.per_time[horizon];
  result.replicates_retained = final_moments.n;
  if (final_moments.n == 0) {
    throw EmptyConditioningError(replicates, total.divergence);
  }
  result.mean = final_moments.mean;
  if (final_moments.n > 1) {
    const double n = static_cast<double>(final_moments.n);
    result.std_error = std::sqrt(final_moments.m2 / (n - 1.0) / n);
  }
  return result;
}

}  // namespace

Trajectory simulate_trajectory(const SirParams& params, const PolicyRule& rule,
                               RandomStream& outcome_rng,
                               RandomStream& policy_rng) {
  validate(params);
  const auto horizon = static_cast<std::size_t>(params.horizon);
  Trajectory traj;
  traj.states.reserve(horizon + 1);
  traj.treatments.reserve(horizon);
  traj.outcomes.reserve(horizon);

  std::vector<double> seen;  // y_0..y_t
  seen.reserve(horizon + 1);
  traj.states.push_back(params.initial_state());
  seen.push_back(params.outcome(traj.states.back()));
  for (std::size_t t = 0; t < horizon; ++t) {
    const Treatment a =
        rule.decide(ObservedHistory{traj.treatments, seen}, policy_rng);
    traj.treatments.push_back(a);
    traj.states.push_back(sir_step(traj.states.back(), params, a, outcome_rng));
    const double y = params.outcome(traj.states.back());
    traj.outcomes.push_back(y);
    seen.push_back(y);
  }
  return traj;
}

EstimateResult estimate_causal(const SirParams& params,
                               std::span<const Treatment> sequence,
                               std::size_t replicates,
                               std::uint64_t master_seed,
                               const EstimatorOptions& options) {
  const PolicyRule rule =
      PolicyRule::forced({sequence.begin(), sequence.end()});
  return run_estimator(params, rule, sequence, replicates, master_seed,
                       options);
}

EstimateResult estimate_associational(const SirParams& params,
                                      const PolicyRule& rule,
                                      std::span<const Treatment> target,
                                      std::size_t replicates,
                                      std::uint64_t master_seed,
                                      const EstimatorOptions& options) {
  return run_estimator(params, rule, target, replicates, master_seed, options);
}

BiasReport assemble_bias_report(double threshold, EstimateResult causal,
                                EstimateResult associational) {
  BiasReport report;
  report.threshold = threshold;
  report.bias = associational.mean - causal.mean;
  const std::size_t n = std::min(causal.per_time_means.size(),
                                 associational.per_time_means.size());
  report.bias_evolution.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    report.bias_evolution[t] =
        associational.per_time_means[t] - causal.per_time_means[t];
  }
  report.causal = std::move(causal);
  report.associational = std::move(associational);
  return report;
}

BiasReport compute_bias_report(const SirParams& params, const PolicyRule& rule,
                               std::span<const Treatment> target,
                               std::size_t replicates,
                               std::uint64_t master_seed,
                               const EstimatorOptions& options) {
  EstimateResult causal =
      estimate_causal(params, target, replicates,
                      derive_subseed(master_seed, kCausalDomain), options);
  EstimateResult associational = estimate_associational(
      params, rule, target, replicates,
      derive_subseed(master_seed, kAssociationalDomain), options);
  double threshold = std::numeric_limits<double>::quiet_NaN();
  if (const auto* r = std::get_if<ThresholdRule>(&rule.variant())) {
    threshold = r->params.threshold;
  }
  return assemble_bias_report(threshold, std::move(causal),
                              std::move(associational));
}

}  // namespace tvc
