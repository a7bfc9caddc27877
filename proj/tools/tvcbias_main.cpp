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

// Command-line front end. Talks to the library only through tvcbias.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "tvcbias/tvcbias.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitIo = 4;

int exit_code(tvc_status status) {
  switch (status) {
    case TVC_OK: return kExitOk;
    case TVC_ERR_INVALID_ARGUMENT:
    case TVC_ERR_CONFIG:
    case TVC_ERR_VALIDATION: return kExitConfig;
    case TVC_ERR_EMPTY_CONDITIONING: return kExitEmpty;
    case TVC_ERR_IO: return kExitIo;
    case TVC_ERR_INTERNAL: return kExitFailure;
  }
  return kExitFailure;
}

int report(tvc_status status) {
  if (status != TVC_OK) {
    std::fprintf(stderr, "tvcbias: %s: %s\n", tvc_status_name(status),
                 tvc_last_error());
  }
  return exit_code(status);
}

struct Flags {
  std::string config;
  std::vector<std::pair<std::string, std::string>> overrides;
};

class ConfigHandle {
 public:
  ConfigHandle() = default;
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
  ~ConfigHandle() { tvc_config_destroy(ptr_); }

  tvc_status open(const Flags& flags) {
    tvc_status s = flags.config.empty()
                       ? tvc_config_create(&ptr_)
                       : tvc_config_load(flags.config.c_str(), &ptr_);
    for (const auto& [key, value] : flags.overrides) {
      if (s != TVC_OK) break;
      s = tvc_config_set(ptr_, key.c_str(), value.c_str());
    }
    if (s == TVC_OK) s = tvc_config_validate(ptr_);
    return s;
  }
  const tvc_config* get() const { return ptr_; }

 private:
  tvc_config* ptr_ = nullptr;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "configuration file");
  struct Override {
    const char* flag;
    const char* key;
    const char* help;
  };
  const Override keys[] = {
      {"--seed", "experiment.seed", "master seed"},
      {"--replicates", "experiment.replicates", "replicates per arm"},
      {"--thresholds", "experiment.thresholds",
       "comma-separated intervention thresholds"},
      {"--out", "experiment.out", "output directory"},
      {"--conditioning", "experiment.conditioning",
       "full-path or per-time"},
      {"--threads", "experiment.threads", "worker threads, 0 for all cores"},
  };
  for (const auto& o : keys) {
    std::string k = o.key;
    cmd->add_option_function<std::string>(
        o.flag,
        [&flags, k](const std::string& v) {
          flags.overrides.emplace_back(k, v);
        },
        o.help);
  }
}

int cmd_print_config(const Flags& flags) {
  ConfigHandle cfg;
  if (tvc_status s = cfg.open(flags); s != TVC_OK) return report(s);
  char* text = nullptr;
  if (tvc_status s = tvc_config_dump(cfg.get(), &text); s != TVC_OK) {
    return report(s);
  }
  std::fputs(text, stdout);
  tvc_string_free(text);
  return kExitOk;
}

int cmd_figure2(const Flags& flags) {
  ConfigHandle cfg;
  if (tvc_status s = cfg.open(flags); s != TVC_OK) return report(s);
  if (tvc_status s = tvc_run_figure2(cfg.get()); s != TVC_OK) {
    return report(s);
  }
  std::printf("wrote figure2.csv and figure2.svg to %s\n",
              tvc_config_output_dir(cfg.get()));
  return kExitOk;
}

std::string cell(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

int cmd_figures34(const Flags& flags) {
  ConfigHandle cfg;
  if (tvc_status s = cfg.open(flags); s != TVC_OK) return report(s);
  std::vector<tvc_threshold_summary> rows(64);
  size_t count = 0;
  const tvc_status s =
      tvc_run_figures34(cfg.get(), rows.data(), rows.size(), &count);
  if (s != TVC_OK && s != TVC_ERR_EMPTY_CONDITIONING) return report(s);
  std::printf("%-10s %-10s %-14s %-10s %s\n", "threshold", "causal_T",
              "associational", "bias_T", "retained");
  for (size_t k = 0; k < count && k < rows.size(); ++k) {
    const auto& r = rows[k];
    std::printf("%-10s %-10s %-14s %-10s %llu/%llu\n",
                cell(r.threshold).c_str(), cell(r.causal_T).c_str(),
                cell(r.associational_T).c_str(), cell(r.bias_T).c_str(),
                static_cast<unsigned long long>(r.retained),
                static_cast<unsigned long long>(r.total));
  }
  std::printf("outputs in %s\n", tvc_config_output_dir(cfg.get()));
  return report(s);
}

int cmd_oracle(const Flags& flags, const std::string& instance_name) {
  ConfigHandle cfg;
  if (tvc_status s = cfg.open(flags); s != TVC_OK) return report(s);
  tvc_instance* instance = nullptr;
  if (tvc_status s = tvc_instance_load(instance_name.c_str(), &instance);
      s != TVC_OK) {
    return report(s);
  }
  tvc_oracle_summary summary{};
  char* text = nullptr;
  const tvc_status s = tvc_oracle_run(
      instance, tvc_config_output_dir(cfg.get()), &summary, &text);
  tvc_instance_destroy(instance);
  if (s != TVC_OK) return report(s);
  std::fputs(text, stdout);
  tvc_string_free(text);
  return kExitOk;
}

int cmd_fuzz(const Flags& flags, std::uint64_t count) {
  ConfigHandle cfg;
  if (tvc_status s = cfg.open(flags); s != TVC_OK) return report(s);
  tvc_fuzz_summary summary{};
  const tvc_status s =
      tvc_fuzz_theorem(tvc_config_seed(cfg.get()), count,
                       tvc_config_output_dir(cfg.get()), &summary);
  if (s != TVC_OK) return report(s);
  std::printf(
      "instances: %llu\nrespected: %llu\n"
      "max bias: %.6g\nsampling attempts: %llu\n",
      static_cast<unsigned long long>(summary.instances),
      static_cast<unsigned long long>(summary.respected),
      summary.max_bias, static_cast<unsigned long long>(summary.attempts));
  if (summary.respected != summary.instances) {
    std::fprintf(stderr, "tvcbias: negative-bias theorem violated\n");
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-varying confounding bias in simulated epidemics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tvc_version());

  Flags flags;
  std::string instance_name = "coin-epidemic";
  std::uint64_t fuzz_count = 100;

  auto* print_config =
      app.add_subcommand("print-config", "print the effective configuration");
  auto* figure2 =
      app.add_subcommand("figure2", "one epidemic without intervention");
  auto* figures34 =
      app.add_subcommand("figures34", "bias across intervention thresholds");
  auto* oracle =
      app.add_subcommand("oracle", "exact analysis of a finite instance");
  auto* fuzz = app.add_subcommand(
      "fuzz-theorem", "check the negative-bias theorem on random instances");
  for (auto* cmd : {print_config, figure2, figures34, oracle, fuzz}) {
    add_common_flags(cmd, flags);
  }
  oracle->add_option("instance", instance_name,
                     "built-in name or JSON instance file")
      ->capture_default_str();
  fuzz->add_option("--count", fuzz_count, "number of random instances")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*print_config) return cmd_print_config(flags);
  if (*figure2) return cmd_figure2(flags);
  if (*figures34) return cmd_figures34(flags);
  if (*oracle) return cmd_oracle(flags, instance_name);
  return cmd_fuzz(flags, fuzz_count);
}
