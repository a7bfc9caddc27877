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

#include "tvcbias/truncated_normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "tvcbias/error.hpp"

namespace tvc {

namespace {

// Upper tail 1 - Phi(z), accurate for large positive z.
double normal_sf(double z) {
  return 0.5 * boost::math::erfc(z / std::numbers::sqrt2);
}

// Quantile of the upper tail: z with 1 - Phi(z) = q.
double normal_isf(double q) {
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

// Standardised truncated draw on [a, b] with a <= 0 or both bounds in the
// lower half (callers reflect otherwise).
double sample_standard(double a, double b, double u) {
  const double pa = normal_cdf(a);
  const double pb = normal_cdf(b);
  const double mass = pb - pa;
  if (!(mass > 0.0) || mass < 1e-300) {
    // Interval too deep in the lower tail for the CDF to resolve it. Near
    // b the density is proportional to exp(|b| (z - b)).
    const double rate = std::max(-b, 1e-300);
    const double width = b - a;
    const double w = -std::log1p(-u * -std::expm1(-rate * width)) / rate;
    return b - w;
  }
  const double p = pa + u * mass;
  if (p < 0.5) return normal_quantile(p);
  // Same point measured from the top; keeps precision when p is near 1.
  const double qa = normal_sf(a);
  const double qb = normal_sf(b);
  const double q = qa - u * (qa - qb);
  return normal_isf(q);
}

}  // namespace

double normal_cdf(double z) {
  return 0.5 * boost::math::erfc(-z / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

void validate(const NoiseSpec& spec) {
  if (!std::isfinite(spec.mean) || !std::isfinite(spec.variance) ||
      !std::isfinite(spec.lower) || !std::isfinite(spec.upper)) {
    throw Error(ErrorCode::kInvalidSpec, "noise spec has a non-finite field");
  }
  if (spec.variance < 0.0) {
    throw Error(ErrorCode::kInvalidSpec, "noise variance is negative");
  }
  if (spec.lower > spec.upper) {
    throw Error(ErrorCode::kInvalidSpec, "noise lower bound exceeds upper");
  }
}

double sample_truncated_normal(const NoiseSpec& spec, RandomStream& rng) {
  validate(spec);
  const double u = rng.uniform();
  if (spec.variance == 0.0 || spec.lower == spec.upper) {
    return std::clamp(spec.mean, spec.lower, spec.upper);
  }
  const double sd = std::sqrt(spec.variance);
  double a = (spec.lower - spec.mean) / sd;
  double b = (spec.upper - spec.mean) / sd;
  double z;
  if (a > 0.0) {
    // Whole interval above the mean: sample the mirror image.
    z = -sample_standard(-b, -a, 1.0 - u);
  } else {
    z = sample_standard(a, b, u);
  }
  return std::clamp(spec.mean + sd * z, spec.lower, spec.upper);
}

}  // namespace tvc
