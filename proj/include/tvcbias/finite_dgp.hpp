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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tvcbias/sir.hpp"

namespace tvc::oracle {

// Positions in the outcome or treatment alphabet.
using Index = std::size_t;
using IndexPath = std::vector<Index>;

inline constexpr std::uint64_t kDefaultPathCap = 10'000'000;

// A small discrete-time, discrete-state outcome process together with a
// tabular intervention rule. Kernels are stored densely by history:
//
//   outcome kernel p_t(y_t | a_1..a_t, y_1..y_{t-1}),  t = 1..T
//   rule kernel    pi_t(a_{t+1} | a_1..a_t, y_1..y_t), t = 0..T-1
//
// Rows start undefined. Reading an undefined row throws kValidation; rows
// only need to exist where a computation reaches them with positive mass.
class FiniteDgp {
 public:
  // Throws kInvalidSpec on empty alphabets, a non-increasing outcome
  // alphabet or T < 1, and kInstanceTooLarge when |Y|^T * |A|^T > cap.
  FiniteDgp(int horizon, std::vector<double> outcome_values,
            std::vector<Treatment> treatment_values, double initial_outcome,
            std::uint64_t cap = kDefaultPathCap);

  int horizon() const { return horizon_; }
  std::size_t num_outcomes() const { return outcome_values_.size(); }
  std::size_t num_treatments() const { return treatment_values_.size(); }
  const std::vector<double>& outcome_values() const { return outcome_values_; }
  const std::vector<Treatment>& treatment_values() const {
    return treatment_values_;
  }
  double initial_outcome() const { return initial_outcome_; }
  double outcome_value(Index y) const { return outcome_values_[y]; }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  // Entries must be finite, >= 0 and sum to 1 within 1e-12, else
  // kValidation. History lengths: t treatments and t-1 outcomes.
  void set_outcome_row(int t, std::span<const Index> treatments,
                       std::span<const Index> outcomes,
                       std::span<const double> probabilities);
  // History lengths: t treatments and t outcomes.
  void set_rule_row(int t, std::span<const Index> treatments,
                    std::span<const Index> outcomes,
                    std::span<const double> probabilities);

  bool has_outcome_row(int t, std::span<const Index> treatments,
                       std::span<const Index> outcomes) const;
  bool has_rule_row(int t, std::span<const Index> treatments,
                    std::span<const Index> outcomes) const;

  std::span<const double> outcome_row(int t, std::span<const Index> treatments,
                                      std::span<const Index> outcomes) const;
  std::span<const double> rule_row(int t, std::span<const Index> treatments,
                                   std::span<const Index> outcomes) const;

  // Maps alphabet values to indices; kInvalidSpec if a value is absent.
  Index treatment_index(Treatment value) const;
  Index outcome_index(double value) const;

 private:
  struct Table {
    std::size_t width = 0;
    std::vector<double> values;
    std::vector<char> defined;
  };

  std::size_t row_key(int t, std::size_t n_treatments,
                      std::span<const Index> treatments,
                      std::size_t n_outcomes,
                      std::span<const Index> outcomes) const;
  void set_row(Table& table, const char* kind, int t, std::size_t key,
               std::span<const double> probabilities);

  int horizon_;
  std::vector<double> outcome_values_;
  std::vector<Treatment> treatment_values_;
  double initial_outcome_;
  std::string name_;
  std::vector<Table> outcome_tables_;  // [t], t = 1..T (index 0 unused)
  std::vector<Table> rule_tables_;     // [t], t = 0..T-1
};

// Human-readable "t=2 treatments=[0,1] outcomes=[1]" for messages.
std::string describe_history(int t, std::span<const Index> treatments,
                             std::span<const Index> outcomes);

}  // namespace tvc::oracle
