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

#include "tvcbias/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tvcbias/error.hpp"
#include "tvcbias/output.hpp"
#include "tvcbias/policy.hpp"
#include "tvcbias/random_stream.hpp"

namespace tvc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty() || dir.back() == '/') return dir + file;
  return dir + "/" + file;
}

std::string percent_label(double threshold) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "threshold %g%%", threshold * 100.0);
  return buf;
}

EstimatorOptions options_of(const ExperimentConfig& config) {
  return {config.threads, config.conditioning};
}

std::vector<double> time_axis(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = static_cast<double>(t);
  return x;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

Trajectory simulate_reference_trajectory(const ExperimentConfig& config) {
  validate(config);
  const std::vector<Treatment> zeros(
      static_cast<std::size_t>(config.sir.horizon), 0);
  const PolicyRule rule = PolicyRule::forced(zeros);
  const std::uint64_t causal = derive_subseed(config.seed, kCausalDomain);
  RandomStream outcome_rng = derive_replicate_stream(causal, 0);
  RandomStream policy_rng =
      derive_replicate_stream(derive_subseed(causal, kPolicyDomain), 0);
  return simulate_trajectory(config.sir, rule, outcome_rng, policy_rng);
}

std::string figure2_csv(const Trajectory& trajectory, const SirParams& params) {
  std::ostringstream os;
  os << "t,susceptible,infected,recovered,y\n";
  for (std::size_t t = 0; t < trajectory.states.size(); ++t) {
    const CompartmentState& s = trajectory.states[t];
    os << t << ',' << format_number(s.s) << ',' << format_number(s.i) << ','
       << format_number(s.r) << ',' << format_number(params.outcome(s))
       << '\n';
  }
  return os.str();
}

std::string figure2_svg(const Trajectory& trajectory, const SirParams& params) {
  const std::size_t n = trajectory.states.size();
  ChartSeries s{"Susceptible", time_axis(n), {}, false};
  ChartSeries i{"Infected", time_axis(n), {}, false};
  ChartSeries r{"Recovered", time_axis(n), {}, false};
  for (const CompartmentState& state : trajectory.states) {
    s.y.push_back(state.s / params.population);
    i.y.push_back(state.i / params.population);
    r.y.push_back(state.r / params.population);
  }
  LineChart chart("Single epidemic without intervention", "day",
                  "proportion of population");
  chart.add_series(std::move(s));
  chart.add_series(std::move(i));
  chart.add_series(std::move(r));
  return chart.render();
}

Trajectory run_figure2(const ExperimentConfig& config) {
  Trajectory traj = simulate_reference_trajectory(config);
  ensure_directory(config.output_dir);
  write_text_file(join_path(config.output_dir, "figure2.csv"),
                  figure2_csv(traj, config.sir));
  write_text_file(join_path(config.output_dir, "figure2.svg"),
                  figure2_svg(traj, config.sir));
  return traj;
}

std::size_t Figures34Result::empty_count() const {
  std::size_t n = 0;
  for (const auto& t : thresholds) n += t.associational ? 0 : 1;
  return n;
}

double Figures34Result::bias_at(std::size_t k) const {
  const auto& assoc = thresholds.at(k).associational;
  return assoc ? assoc->mean - causal.mean : kNaN;
}

Figures34Result compute_figures34(const ExperimentConfig& config) {
  validate(config);
  const std::vector<Treatment> zeros(
      static_cast<std::size_t>(config.sir.horizon), 0);
  const EstimatorOptions options = options_of(config);
  Figures34Result result;
  result.causal =
      estimate_causal(config.sir, zeros, config.replicates,
                      derive_subseed(config.seed, kCausalDomain), options);
  const std::uint64_t assoc_seed =
      derive_subseed(config.seed, kAssociationalDomain);
  for (double threshold : config.thresholds) {
    ThresholdResult row;
    row.threshold = threshold;
    try {
      row.associational = estimate_associational(
          config.sir, PolicyRule::threshold(threshold), zeros,
          config.replicates, assoc_seed, options);
      row.divergence_histogram = row.associational->divergence_histogram;
    } catch (const EmptyConditioningError& e) {
      row.divergence_histogram = e.divergence_histogram();
    }
    result.thresholds.push_back(std::move(row));
  }
  return result;
}

std::string evolution_csv(const Figures34Result& result) {
  std::ostringstream os;
  os << kEvolutionHeader << '\n';
  const auto& causal = result.causal.per_time_means;
  for (const ThresholdResult& row : result.thresholds) {
    for (std::size_t t = 0; t < causal.size(); ++t) {
      double assoc = kNaN;
      if (row.associational) assoc = row.associational->per_time_means[t];
      os << format_number(row.threshold) << ',' << t << ','
         << format_number(causal[t]) << ',' << format_number(assoc) << ','
         << format_number(assoc - causal[t]) << '\n';
    }
  }
  return os.str();
}

std::string summary_csv(const Figures34Result& result) {
  std::ostringstream os;
  os << kSummaryHeader << '\n';
  for (std::size_t k = 0; k < result.thresholds.size(); ++k) {
    const ThresholdResult& row = result.thresholds[k];
    const double assoc = row.associational ? row.associational->mean : kNaN;
    const std::size_t retained =
        row.associational ? row.associational->replicates_retained : 0;
    os << format_number(row.threshold) << ','
       << format_number(result.causal.mean) << ',' << format_number(assoc)
       << ',' << format_number(result.bias_at(k)) << ',' << retained << ','
       << result.causal.replicates_total << '\n';
  }
  return os.str();
}

std::string figure3_svg(const Figures34Result& result) {
  LineChart chart("Time-varying confounding bias", "day",
                  "associational minus causal");
  const std::size_t n = result.causal.per_time_means.size();
  for (const ThresholdResult& row : result.thresholds) {
    if (!row.associational) continue;
    ChartSeries s{percent_label(row.threshold), time_axis(n), {}, false};
    for (std::size_t t = 0; t < n; ++t) {
      s.y.push_back(row.associational->per_time_means[t] -
                    result.causal.per_time_means[t]);
    }
    chart.add_series(std::move(s));
  }
  return chart.render();
}

std::string figure4_svg(const Figures34Result& result) {
  LineChart chart("Cumulative infections under no intervention", "day",
                  "expected cumulative proportion infected");
  const std::size_t n = result.causal.per_time_means.size();
  chart.add_series(
      {"causal", time_axis(n), result.causal.per_time_means, false});
  for (const ThresholdResult& row : result.thresholds) {
    if (!row.associational) continue;
    chart.add_series({"associational, " + percent_label(row.threshold),
                      time_axis(n), row.associational->per_time_means, true});
  }
  return chart.render();
}

Figures34Result run_figures34(const ExperimentConfig& config) {
  Figures34Result result = compute_figures34(config);
  ensure_directory(config.output_dir);
  write_text_file(join_path(config.output_dir, "bias_evolution.csv"),
                  evolution_csv(result));
  write_text_file(join_path(config.output_dir, "bias_summary.csv"),
                  summary_csv(result));
  write_text_file(join_path(config.output_dir, "figure3.svg"),
                  figure3_svg(result));
  write_text_file(join_path(config.output_dir, "figure4.svg"),
                  figure4_svg(result));
  return result;
}

namespace {

const char* adaptation_label(const oracle::AdaptationPartition& part,
                             oracle::Index y) {
  for (auto v : part.upweighted) {
    if (v == y) return "upweighted";
  }
  for (auto v : part.downweighted) {
    if (v == y) return "downweighted";
  }
  return "neutral";
}

bool advance(oracle::IndexPath& seq, std::size_t digits) {
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (++seq[k] < digits) return true;
    seq[k] = 0;
  }
  return false;
}

std::string outcome_list(const oracle::FiniteDgp& dgp,
                         const oracle::IndexPath& ys) {
  std::string out;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (k) out += ';';
    out += format_number(dgp.outcome_value(ys[k]));
  }
  return out;
}

std::string ratio_table(const oracle::FiniteDgp& dgp,
                        const oracle::IndexPath& target) {
  using oracle::Index;
  using oracle::Lag;
  std::ostringstream os;
  os << "t,outcome_history,y_t,probability,lag0,lag1,ratio,adaptation,"
        "moving_marginal\n";
  const std::span<const Index> path(target);
  for (int t = 1; t < dgp.horizon(); ++t) {
    const auto treatments = path.first(static_cast<std::size_t>(t));
    const auto future = path.subspan(static_cast<std::size_t>(t));
    oracle::IndexPath history(static_cast<std::size_t>(t - 1), 0);
    do {
      if (oracle::history_probability(dgp, treatments, history) == 0.0) {
        continue;
      }
      const double lag1 = oracle::prospective_propensity(
          dgp, Lag::kOne, future, treatments, history);
      if (lag1 == 0.0) continue;
      const auto part =
          oracle::classify_adaptations(dgp, future, treatments, history);
      for (const auto& [y, ratio] : part.ratios) {
        oracle::IndexPath with_y = history;
        with_y.push_back(y);
        const double lag0 = oracle::prospective_propensity(
            dgp, Lag::kZero, future, treatments, with_y);
        os << t << ',' << outcome_list(dgp, history) << ','
           << format_number(dgp.outcome_value(y)) << ','
           << format_number(part.probabilities.at(y)) << ','
           << format_number(lag0) << ',' << format_number(lag1) << ','
           << format_number(ratio) << ',' << adaptation_label(part, y) << ','
           << format_number(oracle::moving_marginal_expectation(
                  dgp, y, future, treatments, history))
           << '\n';
      }
    } while (advance(history, dgp.num_outcomes()));
  }
  return os.str();
}

}  // namespace

OracleSuiteResult evaluate_oracle(const oracle::OracleInstance& instance) {
  const oracle::FiniteDgp& dgp = instance.dgp;
  OracleSuiteResult r;
  r.name = dgp.name().empty() ? "instance" : dgp.name();
  r.verdict = oracle::verify_theorem1(dgp, instance.target);
  r.associational_by_ratios =
      oracle::associational_by_ratios(dgp, instance.target);
  r.opportunism = oracle::check_opportunistic(dgp, instance.target);
  r.monotone_process = oracle::check_monotone_process(dgp);

  std::ostringstream sum;
  sum << "quantity,value\n"
      << "g_formula," << format_number(r.verdict.g_formula) << '\n'
      << "associational," << format_number(r.verdict.associational) << '\n'
      << "associational_by_ratios,"
      << format_number(r.associational_by_ratios) << '\n'
      << "bias," << format_number(r.verdict.bias) << '\n'
      << "opportunistic_everywhere,"
      << yes_no(r.verdict.opportunistic_everywhere) << '\n'
      << "theorem_respected," << yes_no(r.verdict.theorem_respected) << '\n'
      << "monotone_process," << yes_no(r.monotone_process) << '\n';
  r.summary_csv = sum.str();

  r.ratios_csv = ratio_table(dgp, instance.target);

  std::ostringstream opp;
  opp << "t,nonconstant_ratio,condition_i,condition_ii,opportunistic,margin,"
         "histories_checked,histories_skipped\n";
  for (const auto& v : r.opportunism.times) {
    opp << v.t << ',' << yes_no(v.nonconstant_ratio) << ','
        << yes_no(v.condition_i) << ',' << yes_no(v.condition_ii) << ','
        << yes_no(v.opportunistic) << ',' << format_number(v.margin) << ','
        << v.histories_checked << ',' << v.histories_skipped << '\n';
  }
  r.opportunism_csv = opp.str();

  std::ostringstream text;
  text << "instance: " << r.name << '\n'
       << "horizon: " << dgp.horizon() << '\n'
       << "target treatments:";
  for (auto a : instance.target) text << ' ' << dgp.treatment_values()[a];
  text << '\n'
       << "g-formula E[Y_T^a]:        " << format_number(r.verdict.g_formula)
       << '\n'
       << "associational E[Y_T | a]:  "
       << format_number(r.verdict.associational) << '\n'
       << "  via ratio decomposition: "
       << format_number(r.associational_by_ratios) << '\n'
       << "bias:                      " << format_number(r.verdict.bias)
       << '\n';
  for (const auto& v : r.opportunism.times) {
    text << "t=" << v.t << ": "
         << (v.nonconstant_ratio ? "" : "constant ratio, ")
         << (v.opportunistic ? "opportunistic" : "not opportunistic")
         << " (condition i " << yes_no(v.condition_i) << ", condition ii "
         << yes_no(v.condition_ii) << ", margin " << format_number(v.margin)
         << ")\n";
  }
  text << "opportunistic at every t:  "
       << yes_no(r.verdict.opportunistic_everywhere) << '\n'
       << "monotone outcome process:  " << yes_no(r.monotone_process) << '\n'
       << "negative-bias theorem:     "
       << (r.verdict.theorem_respected ? "respected" : "VIOLATED") << '\n';
  r.summary_text = text.str();
  return r;
}

OracleSuiteResult run_oracle_suite(const oracle::OracleInstance& instance,
                                   const std::string& output_dir) {
  OracleSuiteResult r = evaluate_oracle(instance);
  ensure_directory(output_dir);
  write_text_file(join_path(output_dir, r.name + "_summary.csv"),
                  r.summary_csv);
  write_text_file(join_path(output_dir, r.name + "_ratios.csv"),
                  r.ratios_csv);
  write_text_file(join_path(output_dir, r.name + "_opportunism.csv"),
                  r.opportunism_csv);
  write_text_file(join_path(output_dir, r.name + "_summary.txt"),
                  r.summary_text);
  return r;
}

oracle::FuzzSummary run_fuzz_theorem(std::uint64_t seed, std::size_t count,
                                     const std::string& output_dir) {
  oracle::FuzzSummary summary = oracle::fuzz_theorem(seed, count);
  std::ostringstream os;
  os << "index,horizon,outcomes,attempts,g_formula,associational,bias,"
        "theorem_respected\n";
  for (const auto& rec : summary.records) {
    os << rec.index << ',' << rec.horizon << ',' << rec.outcomes << ','
       << rec.attempts << ',' << format_number(rec.verdict.g_formula) << ','
       << format_number(rec.verdict.associational) << ','
       << format_number(rec.verdict.bias) << ','
       << yes_no(rec.verdict.theorem_respected) << '\n';
  }
  ensure_directory(output_dir);
  write_text_file(join_path(output_dir, "fuzz_theorem.csv"), os.str());
  return summary;
}

}  // namespace tvc
