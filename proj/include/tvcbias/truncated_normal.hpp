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

#include "tvcbias/random_stream.hpp"

namespace tvc {

struct NoiseSpec {
  double mean = 0.0;
  double variance = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Throws Error(kInvalidSpec) on non-finite fields, negative variance or
// lower > upper.
void validate(const NoiseSpec& spec);

// Draws from N(mean, variance) restricted to [lower, upper] by inversion.
// Exactly one uniform is taken from `rng` per call, whatever the spec, so
// streams stay aligned across replicates that take different branches.
// Zero variance returns clamp(mean, lower, upper).
double sample_truncated_normal(const NoiseSpec& spec, RandomStream& rng);

// Standard normal CDF and quantile used by the sampler.
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace tvc
