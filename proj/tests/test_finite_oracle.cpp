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

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "doctest.h"
#include "reference_oracle.hpp"
#include "tvcbias/error.hpp"
#include "tvcbias/finite_dgp.hpp"
#include "tvcbias/instances.hpp"
#include "tvcbias/oracle.hpp"

namespace o = tvc::oracle;
using o::FiniteDgp;
using o::Index;
using o::IndexPath;

namespace {

constexpr double kTight = 1e-12;
constexpr double kIdentity = 1e-10;

IndexPath first(const IndexPath& v, std::size_t n) {
  return IndexPath(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
}
IndexPath rest(const IndexPath& v, std::size_t n) {
  return IndexPath(v.begin() + static_cast<std::ptrdiff_t>(n), v.end());
}

// Monotone process: Y_t = Y_{t-1} + Bernoulli(q_t(a_t)), so f_{T,t} is
// y_t plus a constant. Rule: persistent, P(A_{t+1} = 1 | y_t) nondecreasing
// in y_t (a hard threshold when `hard`).
o::OracleInstance monotone_instance(std::mt19937_64& rng, bool hard) {
  std::uniform_int_distribution<int> pick_t(2, 4);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  const int horizon = pick_t(rng);
  const std::size_t ny = static_cast<std::size_t>(horizon) + 1;
  std::vector<double> values(ny);
  for (std::size_t k = 0; k < ny; ++k) values[k] = double(k);
  FiniteDgp dgp(horizon, values, {0, 1}, 0.0);

  std::vector<std::vector<double>> q(horizon + 1, std::vector<double>(2));
  for (auto& row : q) {
    row[0] = unif(rng);
    row[1] = row[0] * unif(rng);
  }
  std::vector<std::vector<double>> trigger(horizon + 1,
                                           std::vector<double>(ny));
  for (auto& row : trigger) {
    const auto cut = std::uniform_int_distribution<std::size_t>(0, ny)(rng);
    double p = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      if (hard) {
        row[y] = y >= cut ? 1.0 : 0.0;
      } else {
        p = std::min(1.0, p + unif(rng) * 0.4);
        row[y] = p;
      }
    }
  }

  for (int t = 0; t < horizon; ++t) {
    const auto st = static_cast<std::size_t>(t);
    IndexPath a(st, 0);
    do {
      IndexPath y(st, 0);
      do {
        bool started = false;
        for (Index v : a) started = started || v == 1;
        const double p1 =
            started ? 1.0 : (t == 0 ? 0.0 : trigger[st][y.back()]);
        dgp.set_rule_row(t, a, y, std::vector{1.0 - p1, p1});
      } while (ref::next_digits(y, ny));
    } while (ref::next_digits(a, 2));

    IndexPath an(st + 1, 0);
    do {
      IndexPath y(st, 0);
      do {
        const Index level = y.empty() ? 0 : y.back();
        const double up = q[st + 1][an.back()];
        std::vector<double> row(ny, 0.0);
        row[level] = 1.0 - up;
        row[std::min(level + 1, ny - 1)] += up;
        dgp.set_outcome_row(t + 1, an, y, row);
      } while (ref::next_digits(y, ny));
    } while (ref::next_digits(an, 2));
  }
  return {std::move(dgp), IndexPath(static_cast<std::size_t>(horizon), 0)};
}

}  // namespace

TEST_CASE("coin-epidemic: exact quantities") {
  const auto inst = o::builtin_instance("coin-epidemic");
  const auto& dgp = inst.dgp;
  const IndexPath target{0, 0};
  const IndexPath none, a1{0}, fut{0};

  CHECK(std::abs(o::g_formula_exact(dgp, target) - 1.1) < kTight);
  CHECK(std::abs(o::associational_exact(dgp, target) - 0.6) < kTight);
  CHECK(std::abs(o::associational_by_ratios(dgp, target) - 0.6) < kTight);
  CHECK(std::abs(ref::g_formula(dgp, target) - 1.1) < kTight);
  CHECK(std::abs(ref::associational(dgp, target) - 0.6) < kTight);

  CHECK(o::prospective_propensity(dgp, o::Lag::kZero, fut, a1, IndexPath{0}) ==
        doctest::Approx(0.8).epsilon(kTight));
  CHECK(o::prospective_propensity(dgp, o::Lag::kOne, fut, a1, none) ==
        doctest::Approx(0.4).epsilon(kTight));
  CHECK(o::prospective_propensity(dgp, o::Lag::kZero, none, target,
                                  IndexPath{0, 1}) == 1.0);
  CHECK(o::adaptive_ratio(dgp, fut, a1, none, 0) ==
        doctest::Approx(2.0).epsilon(kTight));
  CHECK(o::adaptive_ratio(dgp, fut, a1, none, 1) == 0.0);

  const auto part = o::classify_adaptations(dgp, fut, a1, none);
  CHECK(part.upweighted == IndexPath{0});
  CHECK(part.downweighted == IndexPath{1});
  CHECK(part.neutral.empty());

  CHECK(o::moving_marginal_expectation(dgp, 0, fut, a1, none) ==
        doctest::Approx(0.6).epsilon(kTight));
  CHECK(o::moving_marginal_expectation(dgp, 1, fut, a1, none) ==
        doctest::Approx(1.6).epsilon(kTight));

  const auto report = o::check_opportunistic(dgp, target);
  REQUIRE(report.times.size() == 1);
  CHECK(report.times[0].opportunistic);
  CHECK(report.times[0].condition_i);
  CHECK(report.times[0].condition_ii);
  CHECK(report.times[0].margin == doctest::Approx(1.0));
  CHECK(o::check_monotone_process(dgp));

  const auto v = o::verify_theorem1(dgp, target);
  CHECK(std::abs(v.bias + 0.5) < kTight);
  CHECK(v.opportunistic_everywhere);
  CHECK(v.theorem_respected);
}

TEST_CASE("coin-epidemic: enumeration keeps the positive-probability paths") {
  const auto inst = o::builtin_instance("coin-epidemic");
  const auto paths = o::enumerate_paths(inst.dgp);
  double total = 0.0;
  for (const auto& p : paths) {
    CHECK(p.probability > 0.0);
    CHECK(p.treatments[0] == 0);
    CHECK(std::abs(p.probability -
                   ref::joint(inst.dgp, p.treatments, p.outcomes)) < kTight);
    total += p.probability;
  }
  CHECK(paths.size() == 6);
  CHECK(std::abs(total - 1.0) < kTight);
}

TEST_CASE("uniform single-step instance has four equally likely paths") {
  FiniteDgp dgp(1, {0.0, 1.0}, {0, 1}, 0.0);
  dgp.set_rule_row(0, {}, {}, std::vector{0.5, 0.5});
  for (Index a : {0u, 1u}) {
    dgp.set_outcome_row(1, IndexPath{a}, {}, std::vector{0.5, 0.5});
  }
  const auto paths = o::enumerate_paths(dgp);
  REQUIRE(paths.size() == 4);
  for (const auto& p : paths) CHECK(p.probability == 0.25);
  CHECK(o::g_formula_exact(dgp, IndexPath{1}) == 0.5);
  CHECK(o::check_monotone_process(dgp));
  CHECK(o::check_opportunistic(dgp, IndexPath{0}).times.empty());
}

TEST_CASE("reversed rule fails condition (i)") {
  const auto inst = o::builtin_instance("coin-epidemic-reversed");
  const IndexPath a1{0}, fut{0}, none;
  const auto part = o::classify_adaptations(inst.dgp, fut, a1, none);
  CHECK(part.downweighted == IndexPath{0});
  CHECK(part.upweighted == IndexPath{1});
  const auto report = o::check_opportunistic(inst.dgp, inst.target);
  REQUIRE(report.times.size() == 1);
  CHECK_FALSE(report.times[0].condition_i);
  CHECK_FALSE(report.times[0].opportunistic);
  const auto v = o::verify_theorem1(inst.dgp, inst.target);
  CHECK(v.bias > 0.0);
  CHECK_FALSE(v.opportunistic_everywhere);
  CHECK(v.theorem_respected);
}

TEST_CASE("exogenous rule has neutral adaptations and no bias") {
  const auto inst = o::builtin_instance("exogenous-null");
  const IndexPath a1{0}, fut{0}, none;
  for (Index y : {0u, 1u}) {
    CHECK(std::abs(o::adaptive_ratio(inst.dgp, fut, a1, none, y) - 1.0) <
          kTight);
  }
  const auto part = o::classify_adaptations(inst.dgp, fut, a1, none);
  CHECK(part.neutral.size() == 2);
  CHECK_FALSE(part.nonconstant());
  const auto v = o::verify_theorem1(inst.dgp, inst.target);
  CHECK(std::abs(v.bias) < kTight);
  CHECK_FALSE(v.opportunistic_everywhere);
  CHECK(v.theorem_respected);
  for (const IndexPath& target :
       {IndexPath{0, 0}, IndexPath{0, 1}}) {
    CHECK(std::abs(o::associational_exact(inst.dgp, target) -
                   o::g_formula_exact(inst.dgp, target)) < kTight);
  }
}

TEST_CASE("undefined quantities raise errors") {
  const auto inst = o::builtin_instance("coin-epidemic");
  // a_1 = 1 never happens, so conditioning on it is undefined.
  try {
    o::associational_exact(inst.dgp, IndexPath{1, 0});
    FAIL("expected an error");
  } catch (const tvc::Error& e) {
    CHECK(e.code() == tvc::ErrorCode::kUndefinedConditional);
  }
  try {
    o::adaptive_ratio(inst.dgp, IndexPath{0}, IndexPath{1}, {}, 0);
    FAIL("expected an error");
  } catch (const tvc::Error& e) {
    CHECK(e.code() == tvc::ErrorCode::kUndefinedRatio);
  }
  CHECK_THROWS_AS(FiniteDgp(30, {0, 1, 2}, {0, 1}, 0.0), tvc::Error);
}

TEST_CASE("treatment-free kernels make the g-formula target-independent") {
  FiniteDgp dgp(2, {0.0, 1.0}, {0, 1}, 0.0);
  dgp.set_rule_row(0, {}, {}, std::vector{0.5, 0.5});
  for (Index a1 : {0u, 1u}) {
    dgp.set_outcome_row(1, IndexPath{a1}, {}, std::vector{0.3, 0.7});
    for (Index y1 : {0u, 1u}) {
      dgp.set_rule_row(1, IndexPath{a1}, IndexPath{y1},
                       std::vector{y1 ? 0.9 : 0.1, y1 ? 0.1 : 0.9});
      for (Index a2 : {0u, 1u}) {
        dgp.set_outcome_row(2, IndexPath{a1, a2}, IndexPath{y1},
                            std::vector{y1 ? 0.0 : 0.5, y1 ? 1.0 : 0.5});
      }
    }
  }
  const double g = o::g_formula_exact(dgp, IndexPath{0, 0});
  for (const IndexPath& t :
       {IndexPath{0, 1}, IndexPath{1, 0}, IndexPath{1, 1}}) {
    CHECK(o::g_formula_exact(dgp, t) == doctest::Approx(g).epsilon(kTight));
  }
}

TEST_CASE("monotone checker spots a decreasing process") {
  FiniteDgp dgp(3, {0.0, 1.0}, {0}, 0.0);
  dgp.set_rule_row(0, {}, {}, std::vector{1.0});
  dgp.set_outcome_row(1, IndexPath{0}, {}, std::vector{0.5, 0.5});
  for (Index y1 : {0u, 1u}) {
    dgp.set_rule_row(1, IndexPath{0}, IndexPath{y1}, std::vector{1.0});
    dgp.set_outcome_row(2, IndexPath{0, 0}, IndexPath{y1},
                        std::vector{0.5, 0.5});
    for (Index y2 : {0u, 1u}) {
      dgp.set_rule_row(2, IndexPath{0, 0}, IndexPath{y1, y2},
                       std::vector{1.0});
      // A high y_2 deterministically leads to a low y_3.
      dgp.set_outcome_row(3, IndexPath{0, 0, 0}, IndexPath{y1, y2},
                          y2 ? std::vector{1.0, 0.0} : std::vector{0.0, 1.0});
    }
  }
  CHECK_FALSE(o::check_monotone_process(dgp));
}

TEST_CASE("random instances agree with the brute-force reference") {
  std::mt19937_64 rng(20240611);
  for (int n = 0; n < 50; ++n) {
    const FiniteDgp dgp = o::random_finite_dgp(rng);
    const IndexPath target = o::sample_treatment_path(dgp, rng);
    const auto T = static_cast<std::size_t>(dgp.horizon());
    CAPTURE(n);

    CHECK(std::abs(ref::total_probability(dgp) - 1.0) < kIdentity);
    double enumerated = 0.0;
    for (const auto& p : o::enumerate_paths(dgp)) enumerated += p.probability;
    CHECK(std::abs(enumerated - 1.0) < kIdentity);

    CHECK(std::abs(o::g_formula_exact(dgp, target) -
                   ref::g_formula(dgp, target)) < kIdentity);
    CHECK(std::abs(o::associational_exact(dgp, target) -
                   ref::associational(dgp, target)) < kIdentity);

    for (std::size_t t = 1; t < T; ++t) {
      const IndexPath a = first(target, t);
      const IndexPath fut = rest(target, t);
      IndexPath hist(t - 1, 0);
      do {
        if (o::history_probability(dgp, a, hist) == 0.0) continue;
        const double lag1 =
            o::prospective_propensity(dgp, o::Lag::kOne, fut, a, hist);
        CHECK(std::abs(lag1 - ref::propensity(dgp, a, hist, fut)) < kIdentity);
        if (lag1 == 0.0) continue;
        const auto part = o::classify_adaptations(dgp, fut, a, hist);
        double zero_mean = 0.0;
        for (const auto& [y, s] : part.ratios) {
          IndexPath with = hist;
          with.push_back(y);
          const double p = part.probabilities.at(y);
          zero_mean += (s - 1.0) * p;
          CHECK(std::abs(s * lag1 -
                         ref::propensity(dgp, a, with, fut)) < kIdentity);
          // Bayes step: p(y_t | full path, history) = s_t p_t(y_t | .).
          CHECK(std::abs(ref::outcome_given_full_path(dgp, target, hist, y) -
                         s * p) < kIdentity);
          CHECK(std::abs(o::moving_marginal_expectation(dgp, y, fut, a, hist) -
                         ref::forced_expectation(dgp, target, with)) <
                kIdentity);
        }
        CHECK(std::abs(zero_mean) < kIdentity);
      } while (ref::next_digits(hist, dgp.num_outcomes()));
    }
    // Ratio decomposition of the associational quantity.
    CHECK(std::abs(o::associational_by_ratios(dgp, target) -
                   o::associational_exact(dgp, target)) < kIdentity);
  }
}

TEST_CASE("monotone processes with monotone rules are opportunistic") {
  std::mt19937_64 rng(7);
  int nonconstant = 0;
  for (int n = 0; n < 60; ++n) {
    CAPTURE(n);
    const auto inst = monotone_instance(rng, n % 2 == 0);
    const double mass = ref::sum_joint(
        inst.dgp, [&](const IndexPath& a, const IndexPath&) {
          return a == inst.target ? 1.0 : 0.0;
        });
    if (mass == 0.0) continue;
    REQUIRE(o::check_monotone_process(inst.dgp));
    const auto report = o::check_opportunistic(inst.dgp, inst.target);
    for (const auto& v : report.times) {
      if (!v.nonconstant_ratio) continue;
      CHECK(v.condition_i);
      CHECK(v.opportunistic);
    }
    const auto verdict = o::verify_theorem1(inst.dgp, inst.target);
    if (verdict.opportunistic_everywhere) {
      ++nonconstant;
      CHECK(verdict.bias < 0.0);
    }
    CHECK(verdict.theorem_respected);
  }
  CHECK(nonconstant > 30);
}

TEST_CASE("randomized opportunistic instances have negative bias") {
  const auto summary = o::fuzz_theorem(20240611, 100);
  CHECK(summary.instances == 100);
  CHECK(summary.respected == 100);
  CHECK(summary.violations.empty());
  CHECK(summary.max_bias < 0.0);
}
