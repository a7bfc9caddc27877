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

#include "tvcbias/sir.hpp"

#include <algorithm>
#include <cmath>

#include "tvcbias/error.hpp"
#include "tvcbias/truncated_normal.hpp"

namespace tvc {

void validate(const SirParams& p) {
  const bool ok = std::isfinite(p.population) && p.population > 0.0 &&
                  p.initial_infected > 0.0 &&
                  p.initial_infected < p.population && p.beta > 0.0 &&
                  std::isfinite(p.beta) && p.gamma > 0.0 && p.gamma <= 1.0 &&
                  std::isfinite(p.lambda) && p.overdispersion >= 0.0 &&
                  std::isfinite(p.overdispersion) && p.horizon >= 1;
  if (!ok) {
    throw Error(ErrorCode::kInvalidSpec,
                "SIR parameters out of range (need N > 0, 0 < I0 < N, "
                "beta > 0, 0 < gamma <= 1, overdispersion >= 0, T >= 1)");
  }
}

void validate_state(const CompartmentState& state, const SirParams& params,
                    double tolerance) {
  if (state.s < 0.0 || state.i < 0.0 || state.r < 0.0) {
    throw Error(ErrorCode::kInvalidSpec, "negative compartment");
  }
  if (std::abs(state.total() - params.population) > tolerance) {
    throw Error(ErrorCode::kInvalidSpec, "compartments do not sum to N");
  }
}

StepDrift sir_drift(const CompartmentState& state, const SirParams& params,
                    Treatment treatment) {
  const double contact = std::exp(params.lambda * treatment) * params.beta;
  return {contact * state.s * state.i / params.population,
          params.gamma * state.i};
}

CompartmentState sir_step(const CompartmentState& state,
                          const SirParams& params, Treatment treatment,
                          RandomStream& rng) {
  const StepDrift drift = sir_drift(state, params, treatment);

  const NoiseSpec infection_noise{
      0.0, params.overdispersion * drift.infections, -drift.infections,
      state.s - drift.infections};
  const double eps1 = sample_truncated_normal(infection_noise, rng);
  const double infections =
      std::clamp(drift.infections + eps1, 0.0, state.s);

  // Upper bound is min(N - R, I) - newRec; N - R = S + I >= I.
  const double recover_cap = std::min(params.population - state.r, state.i);
  const NoiseSpec recovery_noise{
      0.0, params.overdispersion * drift.recoveries, -drift.recoveries,
      recover_cap - drift.recoveries};
  const double eps2 = sample_truncated_normal(recovery_noise, rng);
  const double recoveries =
      std::clamp(drift.recoveries + eps2, 0.0, recover_cap);

  CompartmentState next;
  next.s = state.s - infections;
  next.i = state.i + infections - recoveries;
  next.r = state.r + recoveries;
  return next;
}

}  // namespace tvc
