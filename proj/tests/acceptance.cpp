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

// Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reference_oracle.hpp"
#include "tvcbias/estimators.hpp"
#include "tvcbias/experiment.hpp"
#include "tvcbias/experiment_config.hpp"
#include "tvcbias/instances.hpp"
#include "tvcbias/oracle.hpp"
#include "tvcbias/policy.hpp"

namespace fs = std::filesystem;
namespace o = tvc::oracle;

namespace {

int failures = 0;

void verdict(int id, bool pass, const std::string& what,
             const std::string& detail) {
  std::printf("%s  criterion %2d  %s  [%s]\n", pass ? "PASS" : "FAIL", id,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void full_scale_bias() {
  const tvc::ExperimentConfig config;
  const auto start = std::chrono::steady_clock::now();
  const auto r = tvc::compute_figures34(config);
  const double secs = seconds_since(start);

  verdict(1, r.causal.mean >= 0.75,
          "causal mean Y_T under all-zeros >= 0.75 (N=1e6, T=100, 1e5 reps)",
          "mean " + fmt("%.4f", r.causal.mean) + ", se " +
              fmt("%.2g", r.causal.std_error) + ", all six thresholds in " +
              fmt("%.1f", secs) + " s");

  bool c2 = true, c3 = true, c4 = true;
  std::string assoc, bias;
  double previous = INFINITY;
  for (std::size_t k = 0; k < r.thresholds.size(); ++k) {
    const auto& row = r.thresholds[k];
    const double a = row.associational ? row.associational->mean : NAN;
    const double b = r.bias_at(k);
    c2 = c2 && a <= 0.10;
    c3 = c3 && b >= -0.75 && b <= -0.55;
    c4 = c4 && std::abs(b) < previous;
    previous = std::abs(b);
    const std::string th = fmt("%g", row.threshold * 100) + "%=";
    assoc += (k ? " " : "") + th + fmt("%.4f", a);
    bias += (k ? " " : "") + th + fmt("%.4f", b);
  }
  verdict(2, c2, "associational mean Y_T <= 0.10 at every threshold", assoc);
  verdict(3, c3, "bias_T in [-0.75, -0.55] at every threshold", bias);
  verdict(4, c4, "|bias_T| strictly decreasing from 5% to 30%", bias);
}

void oracle_exactness() {
  const auto inst = o::builtin_instance("coin-epidemic");
  const double g = o::g_formula_exact(inst.dgp, inst.target);
  const double a = o::associational_exact(inst.dgp, inst.target);
  const double g_ref = ref::g_formula(inst.dgp, inst.target);
  const double a_ref = ref::associational(inst.dgp, inst.target);
  const bool pass = std::abs(g - 1.1) < 1e-12 && std::abs(a - 0.6) < 1e-12 &&
                    std::abs((a - g) + 0.5) < 1e-12 &&
                    std::abs(g - g_ref) < 1e-12 &&
                    std::abs(a - a_ref) < 1e-12 &&
                    std::abs((a - g) - (a_ref - g_ref)) < 1e-12;
  verdict(5, pass, "coin-epidemic g-formula 1.1, associational 0.6, bias -0.5",
          "g " + fmt("%.15g", g) + ", assoc " + fmt("%.15g", a) + ", bias " +
              fmt("%.15g", a - g));
}

void ratio_identities() {
  std::mt19937_64 rng(20240611);
  double worst_zero_mean = 0.0, worst_decomp = 0.0;
  std::size_t checks = 0, targets = 0;
  for (int n = 0; n < 50; ++n) {
    const auto dgp = o::random_finite_dgp(rng);
    const auto T = static_cast<std::size_t>(dgp.horizon());
    o::IndexPath path(T, 0);
    do {
      double mass = 0.0;
      o::IndexPath y(T, 0);
      do {
        mass += ref::joint(dgp, path, y);
      } while (ref::next_digits(y, dgp.num_outcomes()));
      if (mass > 0.0) {
        ++targets;
        worst_decomp = std::max(
            worst_decomp, std::abs(o::associational_by_ratios(dgp, path) -
                                   o::associational_exact(dgp, path)));
      }
    } while (ref::next_digits(path, dgp.num_treatments()));

    for (std::size_t t = 1; t < T; ++t) {
      o::IndexPath a(t, 0);
      do {
        o::IndexPath fut(T - t, 0);
        do {
          o::IndexPath hist(t - 1, 0);
          do {
            if (o::history_probability(dgp, a, hist) == 0.0) continue;
            if (o::prospective_propensity(dgp, o::Lag::kOne, fut, a, hist) ==
                0.0) {
              continue;
            }
            const auto part = o::classify_adaptations(dgp, fut, a, hist);
            double sum = 0.0;
            for (const auto& [yt, s] : part.ratios) {
              sum += (s - 1.0) * part.probabilities.at(yt);
            }
            worst_zero_mean = std::max(worst_zero_mean, std::abs(sum));
            ++checks;
          } while (ref::next_digits(hist, dgp.num_outcomes()));
        } while (ref::next_digits(fut, dgp.num_treatments()));
      } while (ref::next_digits(a, dgp.num_treatments()));
    }
  }
  verdict(6, worst_zero_mean <= 1e-10 && worst_decomp <= 1e-10,
          "zero-mean and ratio-decomposition identities on 50 random instances",
          std::to_string(checks) + " (t, history, future) cells, worst " +
              fmt("%.2g", worst_zero_mean) + "; " + std::to_string(targets) +
              " targets, worst " + fmt("%.2g", worst_decomp));
}

void theorem_suite() {
  const auto s = o::fuzz_theorem(20240611, 100);
  verdict(7, s.respected == s.instances && s.instances == 100,
          "100 random opportunistic instances all have negative bias",
          std::to_string(s.respected) + "/" + std::to_string(s.instances) +
              " respected, max bias " + fmt("%.3g", s.max_bias));
}

void null_control() {
  tvc::SirParams params;
  params.population = 1e4;
  params.horizon = 10;
  const std::vector<tvc::Treatment> zeros(10, 0);
  const auto r = tvc::compute_bias_report(
      params, tvc::PolicyRule::exogenous(0.5), zeros, 100'000, 20240611);
  const double pooled = std::sqrt(r.causal.std_error * r.causal.std_error +
                                  r.associational.std_error *
                                      r.associational.std_error);
  verdict(8, std::abs(r.bias) < 3.0 * pooled,
          "exogenous rule (p=0.5, N=1e4, T=10, 1e5 reps): |bias| < 3 pooled se",
          "bias " + fmt("%.3g", r.bias) + ", pooled se " +
              fmt("%.3g", pooled) + ", retained " +
              std::to_string(r.associational.replicates_retained));
}

void invariant_suite() {
  const tvc::SirParams params;
  std::size_t bad = 0, steps = 0;
  double worst = 0.0;
  const tvc::PolicyRule rules[] = {
      tvc::PolicyRule::forced(std::vector<tvc::Treatment>(100, 0)),
      tvc::PolicyRule::threshold(0.05), tvc::PolicyRule::threshold(0.3),
      tvc::PolicyRule::exogenous(0.5)};
  for (std::uint64_t rep = 0; rep < 1000; ++rep) {
    auto out = tvc::derive_replicate_stream(777, rep);
    auto pol = tvc::derive_replicate_stream(778, rep);
    const auto traj =
        tvc::simulate_trajectory(params, rules[rep % 4], out, pol);
    double prev = -1.0;
    for (const auto& s : traj.states) {
      const double err = std::abs(s.total() - params.population);
      const double y = params.outcome(s);
      worst = std::max(worst, err);
      bad += (err > 1e-6 || s.s < 0 || s.i < 0 || s.r < 0 || y < prev);
      prev = y;
      ++steps;
    }
  }
  verdict(9, bad == 0,
          "1000 trajectories: conservation, nonnegativity, monotone Y",
          std::to_string(steps) + " states, " + std::to_string(bad) +
              " violations, worst |S+I+R-N| " + fmt("%.2g", worst));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void cli_determinism(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / "tvcbias-acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const char* names[] = {"first", "second", "eight"};
  const char* threads[] = {"1", "1", "8"};
  bool ran = true;
  for (int k = 0; k < 3; ++k) {
    const std::string cmd = "\"" + cli + "\" figures34 --replicates 20000" +
                            " --threads " + threads[k] + " --out \"" +
                            (root / names[k]).string() + "\" > /dev/null";
    ran = ran && std::system(cmd.c_str()) == 0;
  }
  bool same = ran;
  for (const char* csv : {"bias_evolution.csv", "bias_summary.csv"}) {
    const std::string a = slurp(root / "first" / csv);
    same = same && !a.empty() && a == slurp(root / "second" / csv) &&
           a == slurp(root / "eight" / csv);
  }
  verdict(10, same,
          "figures34 twice, threads 1 and 8: byte-identical CSVs",
          ran ? (same ? "identical" : "outputs differ") : "CLI run failed");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "tvcbias";
  full_scale_bias();
  oracle_exactness();
  ratio_identities();
  theorem_suite();
  null_control();
  invariant_suite();
  cli_determinism(cli);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
