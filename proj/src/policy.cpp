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

#include "tvcbias/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tvcbias/error.hpp"

namespace tvc {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate(const ObservedHistory& history) {
  if (history.outcomes.empty()) {
    throw Error(ErrorCode::kMalformedHistory, "empty outcome history");
  }
  if (history.outcomes.size() != history.treatments.size() + 1) {
    throw Error(ErrorCode::kMalformedHistory,
                "outcome and treatment histories are not time-aligned");
  }
}

Treatment decide_threshold(const ObservedHistory& history,
                           const ThresholdRuleParams& params) {
  validate(history);
  const bool started =
      std::any_of(history.treatments.begin(), history.treatments.end(),
                  [](Treatment a) { return a != 0; });
  if (started) return params.persistence ? 1 : 0;
  return history.outcomes.back() > params.threshold ? 1 : 0;
}

Treatment decide_forced(const ObservedHistory& history,
                        std::span<const Treatment> sequence) {
  const std::size_t t = history.current_time();
  if (t >= sequence.size()) {
    std::ostringstream os;
    os << "forced sequence of length " << sequence.size()
       << " has no entry for step " << t + 1;
    throw Error(ErrorCode::kOutOfRange, os.str());
  }
  return sequence[t];
}

Treatment decide_exogenous(const ObservedHistory& /*history*/, double p,
                           RandomStream& rng) {
  return rng.uniform() < p ? 1 : 0;
}

PolicyRule PolicyRule::threshold(double threshold, bool persistence) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidSpec, "threshold must lie in (0, 1)");
  }
  return PolicyRule(ThresholdRule{{threshold, persistence}});
}

PolicyRule PolicyRule::forced(std::vector<Treatment> sequence) {
  return PolicyRule(ForcedRule{std::move(sequence)});
}

PolicyRule PolicyRule::exogenous(double probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidSpec, "probability must lie in [0, 1]");
  }
  return PolicyRule(ExogenousRule{probability});
}

Treatment PolicyRule::decide(const ObservedHistory& history,
                             RandomStream& rng) const {
  return std::visit(
      Overloaded{
          [&](const ThresholdRule& r) {
            return decide_threshold(history, r.params);
          },
          [&](const ForcedRule& r) {
            return decide_forced(history, r.sequence);
          },
          [&](const ExogenousRule& r) {
            return decide_exogenous(history, r.probability, rng);
          },
      },
      rule_);
}

bool PolicyRule::deterministic() const {
  return !std::holds_alternative<ExogenousRule>(rule_);
}

std::string PolicyRule::name() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const ThresholdRule& r) {
                   os << "threshold(" << r.params.threshold
                      << (r.params.persistence ? ", persistent" : "") << ')';
                 },
                 [&](const ForcedRule& r) {
                   os << "forced(length " << r.sequence.size() << ')';
                 },
                 [&](const ExogenousRule& r) {
                   os << "exogenous(" << r.probability << ')';
                 },
             },
             rule_);
  return os.str();
}

}  // namespace tvc
