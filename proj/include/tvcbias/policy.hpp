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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tvcbias/random_stream.hpp"
#include "tvcbias/sir.hpp"

namespace tvc {

// What a rule may look at when choosing a_{t+1}:
//   treatments: a_1..a_t
//   outcomes:   y_0..y_t (y_0 is the initial context)
// so current_time() == t == treatments.size() == outcomes.size() - 1.
struct ObservedHistory {
  std::span<const Treatment> treatments;
  std::span<const double> outcomes;

  std::size_t current_time() const { return treatments.size(); }
};

// Throws Error(kMalformedHistory) if the two sequences are misaligned or
// there is no outcome to decide on.
void validate(const ObservedHistory& history);

struct ThresholdRuleParams {
  double threshold = 0.05;
  bool persistence = true;
};

// Starts the intervention the first time the latest outcome strictly exceeds
// the threshold. With persistence, stays on once started. Deterministic.
Treatment decide_threshold(const ObservedHistory& history,
                           const ThresholdRuleParams& params);

// Looks up a_{t+1} from a fixed sequence; the outcomes are ignored.
// Throws Error(kOutOfRange) past the end of the sequence.
Treatment decide_forced(const ObservedHistory& history,
                        std::span<const Treatment> sequence);

// Treats with probability p regardless of history. Takes one uniform.
Treatment decide_exogenous(const ObservedHistory& history, double p,
                           RandomStream& rng);

struct ThresholdRule {
  ThresholdRuleParams params;
};
struct ForcedRule {
  std::vector<Treatment> sequence;
};
struct ExogenousRule {
  double probability = 0.5;
};

// An immutable intervention-assignment rule.
class PolicyRule {
 public:
  using Variant = std::variant<ThresholdRule, ForcedRule, ExogenousRule>;

  static PolicyRule threshold(double threshold, bool persistence = true);
  static PolicyRule forced(std::vector<Treatment> sequence);
  static PolicyRule exogenous(double probability);

  Treatment decide(const ObservedHistory& history, RandomStream& rng) const;

  // True when decide() never reads the stream.
  bool deterministic() const;
  std::string name() const;
  const Variant& variant() const { return rule_; }

 private:
  explicit PolicyRule(Variant rule) : rule_(std::move(rule)) {}

  Variant rule_;
};

}  // namespace tvc
