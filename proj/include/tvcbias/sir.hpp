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
#include <vector>

#include "tvcbias/random_stream.hpp"

namespace tvc {

using Treatment = int;

// Occupancy of a closed population; compartments are real-valued.
struct CompartmentState {
  double s = 0.0;
  double i = 0.0;
  double r = 0.0;

  double total() const { return s + i + r; }
};

struct SirParams {
  double population = 1'000'000.0;
  double initial_infected = 200.0;
  double beta = 2.0 / 7.0;
  double gamma = 1.0 / 7.0;
  double lambda = -0.2;
  double overdispersion = 500.0;
  int horizon = 100;

  CompartmentState initial_state() const {
    return {population - initial_infected, initial_infected, 0.0};
  }
  // Cumulative-infection proportion 1 - S/N.
  double outcome(const CompartmentState& state) const {
    return 1.0 - state.s / population;
  }
};

// Throws Error(kInvalidSpec) unless N > 0, 0 < I0 < N, beta > 0,
// 0 < gamma <= 1, overdispersion >= 0 and T >= 1.
void validate(const SirParams& params);

// Throws Error(kInvalidSpec) on a negative compartment or when S + I + R
// is further than `tolerance` from N.
void validate_state(const CompartmentState& state, const SirParams& params,
                    double tolerance = 1e-6);

// Expected new infections and recoveries for one step (noise excluded).
struct StepDrift {
  double infections = 0.0;
  double recoveries = 0.0;
};
StepDrift sir_drift(const CompartmentState& state, const SirParams& params,
                    Treatment treatment);

// One day of the stochastic SIR recursion. The treatment scales the contact
// rate by exp(lambda * a). Infection noise is truncated so that total new
// infections land in [0, S]; recovery noise so that recoveries land in
// [0, I], keeping every compartment nonnegative. Takes exactly two uniforms
// from `rng`.
CompartmentState sir_step(const CompartmentState& state,
                          const SirParams& params, Treatment treatment,
                          RandomStream& rng);

// Time-aligned record of one simulated epidemic.
//   states:     t = 0..T
//   treatments: a_1..a_T (treatments[t-1] drove the step into state t)
//   outcomes:   y_1..y_T with y_t = 1 - S_t / N
struct Trajectory {
  std::vector<CompartmentState> states;
  std::vector<Treatment> treatments;
  std::vector<double> outcomes;

  std::size_t horizon() const { return treatments.size(); }
};

}  // namespace tvc
