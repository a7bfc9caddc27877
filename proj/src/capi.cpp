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

#include "tvcbias/tvcbias.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "tvcbias/error.hpp"
#include "tvcbias/experiment.hpp"
#include "tvcbias/experiment_config.hpp"
#include "tvcbias/instances.hpp"

struct tvc_config {
  tvc::ExperimentConfig value;
};

struct tvc_instance {
  tvc::oracle::OracleInstance value;
};

namespace {

thread_local std::string last_error;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

tvc_status status_of(tvc::ErrorCode code) {
  switch (code) {
    case tvc::ErrorCode::kConfig:
    case tvc::ErrorCode::kInvalidSpec:
      return TVC_ERR_CONFIG;
    case tvc::ErrorCode::kEmptyConditioning:
      return TVC_ERR_EMPTY_CONDITIONING;
    case tvc::ErrorCode::kIo:
      return TVC_ERR_IO;
    default:
      return TVC_ERR_VALIDATION;
  }
}

template <typename F>
tvc_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const tvc::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TVC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TVC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return TVC_ERR_INTERNAL;
  }
}

tvc_status invalid(const char* what) {
  last_error = what;
  return TVC_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill(const tvc::OracleSuiteResult& r, tvc_oracle_summary* out) {
  if (out == nullptr) return;
  out->g_formula = r.verdict.g_formula;
  out->associational = r.verdict.associational;
  out->associational_by_ratios = r.associational_by_ratios;
  out->bias = r.verdict.bias;
  out->opportunistic_everywhere = r.verdict.opportunistic_everywhere;
  out->theorem_respected = r.verdict.theorem_respected;
  out->monotone_process = r.monotone_process;
}

}  // namespace

extern "C" {

const char* tvc_version(void) { return "1.0.0"; }

const char* tvc_last_error(void) { return last_error.c_str(); }

const char* tvc_status_name(tvc_status status) {
  switch (status) {
    case TVC_OK: return "ok";
    case TVC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TVC_ERR_CONFIG: return "configuration error";
    case TVC_ERR_VALIDATION: return "validation error";
    case TVC_ERR_EMPTY_CONDITIONING: return "empty conditioning";
    case TVC_ERR_IO: return "I/O error";
    case TVC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void tvc_string_free(char* text) { std::free(text); }

tvc_status tvc_config_create(tvc_config** out) {
  if (out == nullptr) return invalid("out must not be null");
  return guarded([&] {
    *out = new tvc_config{};
    return TVC_OK;
  });
}

tvc_status tvc_config_load(const char* path, tvc_config** out) {
  if (path == nullptr || out == nullptr) {
    return invalid("path and out must not be null");
  }
  return guarded([&] {
    *out = new tvc_config{tvc::load_config(path)};
    return TVC_OK;
  });
}

void tvc_config_destroy(tvc_config* config) { delete config; }

tvc_status tvc_config_set(tvc_config* config, const char* key,
                          const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return invalid("config, key and value must not be null");
  }
  return guarded([&] {
    tvc::set_config_value(config->value, key, value);
    return TVC_OK;
  });
}

tvc_status tvc_config_validate(const tvc_config* config) {
  if (config == nullptr) return invalid("config must not be null");
  return guarded([&] {
    tvc::validate(config->value);
    return TVC_OK;
  });
}

tvc_status tvc_config_dump(const tvc_config* config, char** out) {
  if (config == nullptr || out == nullptr) {
    return invalid("config and out must not be null");
  }
  return guarded([&] {
    *out = copy_string(tvc::serialize_config(config->value));
    return TVC_OK;
  });
}

const char* tvc_config_output_dir(const tvc_config* config) {
  return config == nullptr ? "" : config->value.output_dir.c_str();
}

uint64_t tvc_config_seed(const tvc_config* config) {
  return config == nullptr ? 0 : config->value.seed;
}

tvc_status tvc_run_figure2(const tvc_config* config) {
  if (config == nullptr) return invalid("config must not be null");
  return guarded([&] {
    tvc::run_figure2(config->value);
    return TVC_OK;
  });
}

tvc_status tvc_run_figures34(const tvc_config* config,
                             tvc_threshold_summary* rows, size_t capacity,
                             size_t* count) {
  if (config == nullptr) return invalid("config must not be null");
  return guarded([&] {
    const tvc::Figures34Result r = tvc::run_figures34(config->value);
    if (count != nullptr) *count = r.thresholds.size();
    for (size_t k = 0; rows != nullptr && k < capacity &&
                       k < r.thresholds.size();
         ++k) {
      const auto& row = r.thresholds[k];
      rows[k].threshold = row.threshold;
      rows[k].causal_T = r.causal.mean;
      rows[k].associational_T =
          row.associational ? row.associational->mean : kNaN;
      rows[k].bias_T = r.bias_at(k);
      rows[k].retained =
          row.associational ? row.associational->replicates_retained : 0;
      rows[k].total = r.causal.replicates_total;
    }
    if (r.all_empty()) {
      last_error = "no replicate followed the target path at any threshold";
      return TVC_ERR_EMPTY_CONDITIONING;
    }
    return TVC_OK;
  });
}

tvc_status tvc_instance_load(const char* name_or_path, tvc_instance** out) {
  if (name_or_path == nullptr || out == nullptr) {
    return invalid("name_or_path and out must not be null");
  }
  return guarded([&] {
    *out = new tvc_instance{tvc::oracle::load_instance(name_or_path)};
    return TVC_OK;
  });
}

void tvc_instance_destroy(tvc_instance* instance) { delete instance; }

tvc_status tvc_oracle_evaluate(const tvc_instance* instance,
                               tvc_oracle_summary* out) {
  if (instance == nullptr || out == nullptr) {
    return invalid("instance and out must not be null");
  }
  return guarded([&] {
    fill(tvc::evaluate_oracle(instance->value), out);
    return TVC_OK;
  });
}

tvc_status tvc_oracle_run(const tvc_instance* instance,
                          const char* output_dir, tvc_oracle_summary* out,
                          char** text) {
  if (instance == nullptr || output_dir == nullptr) {
    return invalid("instance and output_dir must not be null");
  }
  return guarded([&] {
    const auto r = tvc::run_oracle_suite(instance->value, output_dir);
    fill(r, out);
    if (text != nullptr) *text = copy_string(r.summary_text);
    return TVC_OK;
  });
}

tvc_status tvc_fuzz_theorem(uint64_t seed, uint64_t count,
                            const char* output_dir, tvc_fuzz_summary* out) {
  if (output_dir == nullptr) return invalid("output_dir must not be null");
  return guarded([&] {
    const auto s = tvc::run_fuzz_theorem(seed, count, output_dir);
    if (out != nullptr) {
      out->instances = s.instances;
      out->respected = s.respected;
      out->attempts = s.attempts;
      out->max_bias = s.max_bias;
    }
    return TVC_OK;
  });
}

}  // extern "C"
