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
#include <vector>

#include "doctest.h"
#include "tvcbias/error.hpp"
#include "tvcbias/estimators.hpp"
#include "tvcbias/policy.hpp"
#include "tvcbias/random_stream.hpp"
#include "tvcbias/sir.hpp"

namespace {

tvc::SirParams noise_free() {
  tvc::SirParams p;
  p.overdispersion = 0.0;
  return p;
}

}  // namespace

TEST_CASE("noise-free step from the initial state") {
  const auto params = noise_free();
  auto rng = tvc::derive_replicate_stream(1, 0);
  const auto next = tvc::sir_step({999800.0, 200.0, 0.0}, params, 0, rng);
  CHECK(std::abs(next.s - 999742.8686) < 1e-3);
  CHECK(std::abs(next.i - 228.5600) < 1e-3);
  CHECK(std::abs(next.r - 28.5714) < 1e-3);
}

TEST_CASE("treatment scales new infections by exp(lambda)") {
  const auto params = noise_free();
  const tvc::CompartmentState state{999800.0, 200.0, 0.0};
  auto rng = tvc::derive_replicate_stream(1, 0);
  const auto off = tvc::sir_step(state, params, 0, rng);
  const auto on = tvc::sir_step(state, params, 1, rng);
  const double ratio = (state.s - on.s) / (state.s - off.s);
  CHECK(ratio == doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
  CHECK(ratio == doctest::Approx(0.8187).epsilon(1e-4));
  CHECK(on.s > off.s);
}

TEST_CASE("extinct epidemic is absorbing") {
  const tvc::SirParams params;
  auto rng = tvc::derive_replicate_stream(2, 0);
  const tvc::CompartmentState state{600000.0, 0.0, 400000.0};
  for (tvc::Treatment a : {0, 1}) {
    const auto next = tvc::sir_step(state, params, a, rng);
    CHECK(next.s == state.s);
    CHECK(next.i == 0.0);
    CHECK(next.r == state.r);
  }
}

TEST_CASE("noise-free steps reproduce the classical recursion exactly") {
  const auto params = noise_free();
  auto rng = tvc::derive_replicate_stream(3, 0);
  tvc::CompartmentState x = params.initial_state();
  double s = x.s, i = x.i, r = x.r;
  for (int t = 0; t < params.horizon; ++t) {
    const double inf = params.beta * s * i / params.population;
    const double rec = params.gamma * i;
    s -= inf;
    i = i + inf - rec;
    r += rec;
    x = tvc::sir_step(x, params, 0, rng);
    REQUIRE(x.s == s);
    REQUIRE(x.i == i);
    REQUIRE(x.r == r);
  }
}

TEST_CASE("attenuation holds whenever S and I are positive") {
  auto params = noise_free();
  auto rng = tvc::derive_replicate_stream(4, 0);
  for (double i : {1.0, 200.0, 50000.0}) {
    const tvc::CompartmentState state{params.population - i - 10.0, i, 10.0};
    const auto off = tvc::sir_step(state, params, 0, rng);
    const auto on = tvc::sir_step(state, params, 1, rng);
    CHECK(state.s - on.s < state.s - off.s);
  }
}

TEST_CASE("random trajectories keep the compartment invariants") {
  const tvc::SirParams params;
  const auto rule = tvc::PolicyRule::exogenous(0.3);
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    auto out = tvc::derive_replicate_stream(99, rep);
    auto pol = tvc::derive_replicate_stream(100, rep);
    const auto traj = tvc::simulate_trajectory(params, rule, out, pol);
    REQUIRE(traj.states.size() == 101);
    REQUIRE(traj.treatments.size() == 100);
    REQUIRE(traj.outcomes.size() == 100);
    double prev = params.outcome(traj.states[0]);
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
      const auto& s = traj.states[t];
      REQUIRE(s.s >= 0.0);
      REQUIRE(s.i >= 0.0);
      REQUIRE(s.r >= 0.0);
      REQUIRE(std::abs(s.total() - params.population) <= 1e-6);
      const double y = params.outcome(s);
      REQUIRE(y >= prev);
      REQUIRE(y >= 0.0);
      REQUIRE(y <= 1.0);
      if (t > 0) REQUIRE(traj.outcomes[t - 1] == y);
      prev = y;
    }
  }
}

TEST_CASE("invalid parameters are rejected") {
  auto bad = [](auto mutate) {
    tvc::SirParams p;
    mutate(p);
    CHECK_THROWS_AS(tvc::validate(p), tvc::Error);
  };
  bad([](tvc::SirParams& p) { p.population = 0.0; });
  bad([](tvc::SirParams& p) { p.initial_infected = 0.0; });
  bad([](tvc::SirParams& p) { p.initial_infected = p.population; });
  bad([](tvc::SirParams& p) { p.beta = 0.0; });
  bad([](tvc::SirParams& p) { p.gamma = 1.5; });
  bad([](tvc::SirParams& p) { p.overdispersion = -1.0; });
  bad([](tvc::SirParams& p) { p.horizon = 0; });
  CHECK_NOTHROW(tvc::validate(tvc::SirParams{}));
}

TEST_CASE("state validation checks conservation") {
  const tvc::SirParams params;
  CHECK_NOTHROW(tvc::validate_state(params.initial_state(), params));
  CHECK_THROWS_AS(tvc::validate_state({999800.0, 200.0, 1.0}, params),
                  tvc::Error);
  CHECK_THROWS_AS(tvc::validate_state({1000001.0, -1.0, 0.0}, params),
                  tvc::Error);
}
