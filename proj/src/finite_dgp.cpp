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

#include "tvcbias/finite_dgp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tvcbias/error.hpp"

namespace tvc::oracle {

namespace {

constexpr double kRowSumTolerance = 1e-12;

double int_pow(std::size_t base, int exponent) {
  double r = 1.0;
  for (int k = 0; k < exponent; ++k) r *= static_cast<double>(base);
  return r;
}

}  // namespace

std::string describe_history(int t, std::span<const Index> treatments,
                             std::span<const Index> outcomes) {
  std::ostringstream os;
  os << "t=" << t << " treatments=[";
  for (std::size_t k = 0; k < treatments.size(); ++k) {
    os << (k ? "," : "") << treatments[k];
  }
  os << "] outcomes=[";
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    os << (k ? "," : "") << outcomes[k];
  }
  os << ']';
  return os.str();
}

FiniteDgp::FiniteDgp(int horizon, std::vector<double> outcome_values,
                     std::vector<Treatment> treatment_values,
                     double initial_outcome, std::uint64_t cap)
    : horizon_(horizon),
      outcome_values_(std::move(outcome_values)),
      treatment_values_(std::move(treatment_values)),
      initial_outcome_(initial_outcome) {
  if (horizon_ < 1) {
    throw Error(ErrorCode::kInvalidSpec, "horizon must be at least 1");
  }
  if (outcome_values_.empty() || treatment_values_.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "alphabets must be non-empty");
  }
  if (!std::is_sorted(outcome_values_.begin(), outcome_values_.end()) ||
      std::adjacent_find(outcome_values_.begin(), outcome_values_.end()) !=
          outcome_values_.end()) {
    throw Error(ErrorCode::kInvalidSpec,
                "outcome alphabet must be strictly increasing");
  }
  {
    auto sorted = treatment_values_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kInvalidSpec, "duplicate treatment value");
    }
  }
  const std::size_t ny = num_outcomes();
  const std::size_t na = num_treatments();
  if (int_pow(ny, horizon_) * int_pow(na, horizon_) >
      static_cast<double>(cap)) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "|Y|^T * |A|^T exceeds the enumeration cap");
  }

  outcome_tables_.resize(static_cast<std::size_t>(horizon_) + 1);
  rule_tables_.resize(static_cast<std::size_t>(horizon_));
  for (int t = 1; t <= horizon_; ++t) {
    auto rows = static_cast<std::size_t>(int_pow(na, t) * int_pow(ny, t - 1));
    Table& table = outcome_tables_[t];
    table.width = ny;
    table.values.assign(rows * ny, 0.0);
    table.defined.assign(rows, 0);
  }
  for (int t = 0; t < horizon_; ++t) {
    auto rows = static_cast<std::size_t>(int_pow(na, t) * int_pow(ny, t));
    Table& table = rule_tables_[t];
    table.width = na;
    table.values.assign(rows * na, 0.0);
    table.defined.assign(rows, 0);
  }
}

std::size_t FiniteDgp::row_key(int t, std::size_t n_treatments,
                               std::span<const Index> treatments,
                               std::size_t n_outcomes,
                               std::span<const Index> outcomes) const {
  if (treatments.size() != n_treatments || outcomes.size() != n_outcomes) {
    throw Error(ErrorCode::kMalformedHistory,
                "history length does not match kernel time: " +
                    describe_history(t, treatments, outcomes));
  }
  std::size_t key = 0;
  for (Index a : treatments) {
    if (a >= num_treatments()) {
      throw Error(ErrorCode::kOutOfRange, "treatment index out of range");
    }
    key = key * num_treatments() + a;
  }
  for (Index y : outcomes) {
    if (y >= num_outcomes()) {
      throw Error(ErrorCode::kOutOfRange, "outcome index out of range");
    }
    key = key * num_outcomes() + y;
  }
  return key;
}

void FiniteDgp::set_row(Table& table, const char* kind, int t, std::size_t key,
                        std::span<const double> probabilities) {
  auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os << kind << " kernel row at t=" << t << ": " << why;
    throw Error(ErrorCode::kValidation, os.str());
  };
  if (probabilities.size() != table.width) fail("wrong number of entries");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < 0.0) fail("entries must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "probabilities sum to " << sum;
    fail(os.str());
  }
  std::copy(probabilities.begin(), probabilities.end(),
            table.values.begin() +
                static_cast<std::ptrdiff_t>(key * table.width));
  table.defined[key] = 1;
}

void FiniteDgp::set_outcome_row(int t, std::span<const Index> treatments,
                                std::span<const Index> outcomes,
                                std::span<const double> probabilities) {
  if (t < 1 || t > horizon_) {
    throw Error(ErrorCode::kOutOfRange, "outcome kernel time out of range");
  }
  const auto key = row_key(t, static_cast<std::size_t>(t), treatments,
                           static_cast<std::size_t>(t - 1), outcomes);
  set_row(outcome_tables_[t], "outcome", t, key, probabilities);
}

void FiniteDgp::set_rule_row(int t, std::span<const Index> treatments,
                             std::span<const Index> outcomes,
                             std::span<const double> probabilities) {
  if (t < 0 || t >= horizon_) {
    throw Error(ErrorCode::kOutOfRange, "rule kernel time out of range");
  }
  const auto key = row_key(t, static_cast<std::size_t>(t), treatments,
                           static_cast<std::size_t>(t), outcomes);
  set_row(rule_tables_[t], "rule", t, key, probabilities);
}

bool FiniteDgp::has_outcome_row(int t, std::span<const Index> treatments,
                                std::span<const Index> outcomes) const {
  if (t < 1 || t > horizon_) return false;
  const auto key = row_key(t, static_cast<std::size_t>(t), treatments,
                           static_cast<std::size_t>(t - 1), outcomes);
  return outcome_tables_[t].defined[key] != 0;
}

bool FiniteDgp::has_rule_row(int t, std::span<const Index> treatments,
                             std::span<const Index> outcomes) const {
  if (t < 0 || t >= horizon_) return false;
  const auto key = row_key(t, static_cast<std::size_t>(t), treatments,
                           static_cast<std::size_t>(t), outcomes);
  return rule_tables_[t].defined[key] != 0;
}

std::span<const double> FiniteDgp::outcome_row(
    int t, std::span<const Index> treatments,
    std::span<const Index> outcomes) const {
  if (t < 1 || t > horizon_) {
    throw Error(ErrorCode::kOutOfRange, "outcome kernel time out of range");
  }
  const auto key = row_key(t, static_cast<std::size_t>(t), treatments,
                           static_cast<std::size_t>(t - 1), outcomes);
  const Table& table = outcome_tables_[t];
  if (!table.defined[key]) {
    throw Error(ErrorCode::kValidation,
                "outcome kernel row is undefined at " +
                    describe_history(t, treatments, outcomes));
  }
  return {table.values.data() + key * table.width, table.width};
}

std::span<const double> FiniteDgp::rule_row(
    int t, std::span<const Index> treatments,
    std::span<const Index> outcomes) const {
  if (t < 0 || t >= horizon_) {
    throw Error(ErrorCode::kOutOfRange, "rule kernel time out of range");
  }
  const auto key = row_key(t, static_cast<std::size_t>(t), treatments,
                           static_cast<std::size_t>(t), outcomes);
  const Table& table = rule_tables_[t];
  if (!table.defined[key]) {
    throw Error(ErrorCode::kValidation,
                "rule kernel row is undefined at " +
                    describe_history(t, treatments, outcomes));
  }
  return {table.values.data() + key * table.width, table.width};
}

Index FiniteDgp::treatment_index(Treatment value) const {
  auto it = std::find(treatment_values_.begin(), treatment_values_.end(),
                      value);
  if (it == treatment_values_.end()) {
    throw Error(ErrorCode::kInvalidSpec,
                "treatment value " + std::to_string(value) +
                    " is not in the alphabet");
  }
  return static_cast<Index>(it - treatment_values_.begin());
}

Index FiniteDgp::outcome_index(double value) const {
  auto it = std::find(outcome_values_.begin(), outcome_values_.end(), value);
  if (it == outcome_values_.end()) {
    std::ostringstream os;
    os << "outcome value " << value << " is not in the alphabet";
    throw Error(ErrorCode::kInvalidSpec, os.str());
  }
  return static_cast<Index>(it - outcome_values_.begin());
}

}  // namespace tvc::oracle
