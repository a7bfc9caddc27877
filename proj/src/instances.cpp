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

#include "tvcbias/instances.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "tvcbias/error.hpp"
#include "tvcbias/oracle.hpp"

namespace tvc::oracle {

namespace {

using json = nlohmann::json;

// Shared shape of the coin-epidemic family; only the time-1 rule differs.
OracleInstance coin_family(const std::string& name,
                           const std::vector<double>& treat_prob_given_y1) {
  FiniteDgp dgp(2, {0.0, 1.0, 2.0}, {0, 1}, 0.0);
  dgp.set_name(name);
  const std::vector<double> coin{0.5, 0.5, 0.0};
  for (Index a1 : {0u, 1u}) {
    const IndexPath a{a1};
    dgp.set_outcome_row(1, a, {}, coin);
    for (Index a2 : {0u, 1u}) {
      const double q = a2 == 0 ? 0.6 : 0.3;
      const IndexPath aa{a1, a2};
      dgp.set_outcome_row(2, aa, IndexPath{0}, std::vector{1 - q, q, 0.0});
      dgp.set_outcome_row(2, aa, IndexPath{1}, std::vector{0.0, 1 - q, q});
      dgp.set_outcome_row(2, aa, IndexPath{2}, std::vector{0.0, 0.0, 1.0});
    }
    for (Index y1 : {0u, 1u, 2u}) {
      const double p = treat_prob_given_y1[y1];
      dgp.set_rule_row(1, a, IndexPath{y1}, std::vector{1 - p, p});
    }
  }
  dgp.set_rule_row(0, {}, {}, std::vector{1.0, 0.0});
  return {std::move(dgp), IndexPath{0, 0}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Expands a JSON history list of values or "*" into index sequences.
template <class Lookup>
std::vector<IndexPath> expand_history(const json& list, std::size_t alphabet,
                                      Lookup lookup) {
  std::vector<IndexPath> out{IndexPath{}};
  for (const auto& item : list) {
    std::vector<Index> choices;
    if (item.is_string() && item.get<std::string>() == "*") {
      for (Index k = 0; k < alphabet; ++k) choices.push_back(k);
    } else {
      choices.push_back(lookup(item));
    }
    std::vector<IndexPath> grown;
    for (const auto& prefix : out) {
      for (Index c : choices) {
        grown.push_back(prefix);
        grown.back().push_back(c);
      }
    }
    out = std::move(grown);
  }
  return out;
}

void apply_rows(FiniteDgp& dgp, const json& rows, const char* field,
                bool is_rule) {
  if (!rows.is_array()) {
    throw Error(ErrorCode::kValidation,
                std::string(field) + " must be an array");
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const json& row = rows[k];
    const std::string where =
        std::string(field) + "[" + std::to_string(k) + "]";
    try {
      const int t = row.at("t").get<int>();
      const auto probs = row.at("p").get<std::vector<double>>();
      const auto treat_lists = expand_history(
          row.at("treatments"), dgp.num_treatments(), [&](const json& v) {
            return dgp.treatment_index(v.get<Treatment>());
          });
      const auto out_lists = expand_history(
          row.at("outcomes"), dgp.num_outcomes(),
          [&](const json& v) { return dgp.outcome_index(v.get<double>()); });
      for (const auto& a : treat_lists) {
        for (const auto& y : out_lists) {
          if (is_rule) {
            dgp.set_rule_row(t, a, y, probs);
          } else {
            dgp.set_outcome_row(t, a, y, probs);
          }
        }
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::kValidation, where + ": " + e.what());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kValidation, where + ": " + e.what());
    }
  }
}

std::vector<double> random_row(std::mt19937_64& rng, std::size_t width,
                               double zero_probability) {
  std::exponential_distribution<double> weight(1.0);
  std::bernoulli_distribution drop(zero_probability);
  std::vector<double> row(width);
  double sum = 0.0;
  for (double& w : row) {
    w = drop(rng) ? 0.0 : weight(rng);
    sum += w;
  }
  if (sum == 0.0) {
    std::uniform_int_distribution<std::size_t> pick(0, width - 1);
    row[pick(rng)] = 1.0;
    sum = 1.0;
  }
  for (double& w : row) w /= sum;
  return row;
}

bool advance(IndexPath& seq, std::size_t digits) {
  for (std::size_t k = seq.size(); k-- > 0;) {
    if (++seq[k] < digits) return true;
    seq[k] = 0;
  }
  return false;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"coin-epidemic", "coin-epidemic-reversed", "exogenous-null"};
}

bool is_builtin(const std::string& name) {
  const auto names = builtin_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

OracleInstance builtin_instance(const std::string& name) {
  if (name == "coin-epidemic") return coin_family(name, {0.2, 1.0, 1.0});
  if (name == "coin-epidemic-reversed") {
    return coin_family(name, {1.0, 0.2, 0.2});
  }
  if (name == "exogenous-null") return coin_family(name, {0.2, 0.2, 0.2});
  throw Error(ErrorCode::kInvalidSpec, "unknown built-in instance: " + name);
}

OracleInstance parse_instance_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("instance is not valid JSON: ") + e.what());
  }
  try {
    FiniteDgp dgp(doc.at("horizon").get<int>(),
                  doc.at("outcomes").get<std::vector<double>>(),
                  doc.at("treatments").get<std::vector<Treatment>>(),
                  doc.value("initial_outcome", 0.0));
    dgp.set_name(doc.value("name", std::string("unnamed")));
    apply_rows(dgp, doc.at("outcome_kernels"), "outcome_kernels", false);
    apply_rows(dgp, doc.at("rule_kernels"), "rule_kernels", true);
    IndexPath target(static_cast<std::size_t>(dgp.horizon()), 0);
    if (doc.contains("target")) {
      const auto values = doc["target"].get<std::vector<Treatment>>();
      if (values.size() != target.size()) {
        throw Error(ErrorCode::kValidation,
                    "target length differs from the horizon");
      }
      for (std::size_t k = 0; k < values.size(); ++k) {
        target[k] = dgp.treatment_index(values[k]);
      }
    }
    return {std::move(dgp), std::move(target)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("malformed instance: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidation) throw;
    throw Error(ErrorCode::kValidation, e.what());
  }
}

OracleInstance load_instance_file(const std::string& path) {
  return parse_instance_json(read_file(path));
}

OracleInstance load_instance(const std::string& name_or_path) {
  if (is_builtin(name_or_path)) return builtin_instance(name_or_path);
  return load_instance_file(name_or_path);
}

FiniteDgp random_finite_dgp(std::mt19937_64& rng, const FuzzOptions& options) {
  std::uniform_int_distribution<int> pick_horizon(options.min_horizon,
                                                  options.max_horizon);
  std::uniform_int_distribution<std::size_t> pick_outcomes(
      options.min_outcomes, options.max_outcomes);
  const int horizon = pick_horizon(rng);
  const std::size_t ny = pick_outcomes(rng);
  const std::size_t na = options.treatments;

  std::vector<double> outcome_values(ny);
  for (std::size_t k = 0; k < ny; ++k) outcome_values[k] = double(k);
  std::vector<Treatment> treatment_values(na);
  for (std::size_t k = 0; k < na; ++k) treatment_values[k] = Treatment(k);

  FiniteDgp dgp(horizon, outcome_values, treatment_values, 0.0);
  dgp.set_name("random");
  for (int t = 0; t < horizon; ++t) {
    // Rule row pi_t over histories (a_1..a_t, y_1..y_t), then outcome row
    // p_{t+1} over (a_1..a_{t+1}, y_1..y_t).
    IndexPath a(static_cast<std::size_t>(t), 0);
    do {
      IndexPath y(static_cast<std::size_t>(t), 0);
      do {
        dgp.set_rule_row(t, a, y, random_row(rng, na, options.zero_probability));
      } while (advance(y, ny));
    } while (advance(a, na));

    IndexPath a_next(static_cast<std::size_t>(t + 1), 0);
    do {
      IndexPath y(static_cast<std::size_t>(t), 0);
      do {
        dgp.set_outcome_row(t + 1, a_next, y,
                            random_row(rng, ny, options.zero_probability));
      } while (advance(y, ny));
    } while (advance(a_next, na));
  }
  return dgp;
}

IndexPath sample_treatment_path(const FiniteDgp& dgp, std::mt19937_64& rng) {
  IndexPath a, y;
  for (int t = 0; t < dgp.horizon(); ++t) {
    const auto rule = dgp.rule_row(t, a, y);
    std::discrete_distribution<Index> pick_a(rule.begin(), rule.end());
    a.push_back(pick_a(rng));
    const auto row = dgp.outcome_row(t + 1, a, y);
    std::discrete_distribution<Index> pick_y(row.begin(), row.end());
    y.push_back(pick_y(rng));
  }
  return a;
}

FuzzCase random_opportunistic_case(std::uint64_t seed, std::size_t index,
                                   const FuzzOptions& options,
                                   std::size_t max_attempts) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    FiniteDgp dgp = random_finite_dgp(rng, options);
    IndexPath target = sample_treatment_path(dgp, rng);
    if (check_opportunistic(dgp, target).opportunistic_everywhere()) {
      return {{std::move(dgp), std::move(target)}, attempt};
    }
  }
  throw Error(ErrorCode::kInvalidSpec,
              "no opportunistic instance found within the attempt budget");
}

FuzzSummary fuzz_theorem(std::uint64_t seed, std::size_t count,
                         const FuzzOptions& options) {
  FuzzSummary summary;
  for (std::size_t k = 0; k < count; ++k) {
    const FuzzCase c = random_opportunistic_case(seed, k, options);
    const TheoremVerdict v =
        verify_theorem1(c.instance.dgp, c.instance.target);
    ++summary.instances;
    summary.records.push_back({k, c.instance.dgp.horizon(),
                               c.instance.dgp.num_outcomes(), c.attempts, v});
    summary.attempts += c.attempts;
    summary.max_bias = std::max(summary.max_bias, v.bias);
    if (v.theorem_respected) {
      ++summary.respected;
    } else {
      summary.violations.push_back(k);
    }
  }
  return summary;
}

}  // namespace tvc::oracle
