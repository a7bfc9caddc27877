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

// C interface to the tvcbias library. Every call that can fail returns a
// tvc_status; on failure tvc_last_error() describes the problem until the
// next call on the same thread.

#ifndef TVCBIAS_TVCBIAS_H_
#define TVCBIAS_TVCBIAS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TVC_API __declspec(dllexport)
#else
#define TVC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tvc_status {
  TVC_OK = 0,
  TVC_ERR_INVALID_ARGUMENT = 1,
  TVC_ERR_CONFIG = 2,
  TVC_ERR_VALIDATION = 3,
  TVC_ERR_EMPTY_CONDITIONING = 4,
  TVC_ERR_IO = 5,
  TVC_ERR_INTERNAL = 6,
} tvc_status;

typedef struct tvc_config tvc_config;
typedef struct tvc_instance tvc_instance;

TVC_API const char* tvc_version(void);
TVC_API const char* tvc_last_error(void);
TVC_API const char* tvc_status_name(tvc_status status);

// Strings returned through char** are owned by the caller.
TVC_API void tvc_string_free(char* text);

// --- Configuration -------------------------------------------------------

TVC_API tvc_status tvc_config_create(tvc_config** out);
TVC_API tvc_status tvc_config_load(const char* path, tvc_config** out);
TVC_API void tvc_config_destroy(tvc_config* config);

// key is "section.key", e.g. "sir.beta" or "experiment.thresholds".
TVC_API tvc_status tvc_config_set(tvc_config* config, const char* key,
                                  const char* value);
TVC_API tvc_status tvc_config_validate(const tvc_config* config);
TVC_API tvc_status tvc_config_dump(const tvc_config* config, char** out);

// Valid until the config is modified or destroyed.
TVC_API const char* tvc_config_output_dir(const tvc_config* config);
TVC_API uint64_t tvc_config_seed(const tvc_config* config);

// --- Simulation experiments ----------------------------------------------

TVC_API tvc_status tvc_run_figure2(const tvc_config* config);

typedef struct tvc_threshold_summary {
  double threshold;
  double causal_T;
  double associational_T;  // NaN when empty
  double bias_T;           // NaN when empty
  uint64_t retained;
  uint64_t total;
} tvc_threshold_summary;

// Writes the figure 3/4 outputs. When rows is non-null, up to capacity
// per-threshold summaries are copied out; *count receives the number of
// thresholds. Returns TVC_ERR_EMPTY_CONDITIONING (after writing the files)
// when no threshold retained any replicate.
TVC_API tvc_status tvc_run_figures34(const tvc_config* config,
                                     tvc_threshold_summary* rows,
                                     size_t capacity, size_t* count);

// --- Finite oracle -------------------------------------------------------

// Accepts a built-in name or a path to a JSON instance file.
TVC_API tvc_status tvc_instance_load(const char* name_or_path,
                                     tvc_instance** out);
TVC_API void tvc_instance_destroy(tvc_instance* instance);

typedef struct tvc_oracle_summary {
  double g_formula;
  double associational;
  double associational_by_ratios;
  double bias;
  int opportunistic_everywhere;
  int theorem_respected;
  int monotone_process;
} tvc_oracle_summary;

TVC_API tvc_status tvc_oracle_evaluate(const tvc_instance* instance,
                                       tvc_oracle_summary* out);

// Writes the report files to output_dir. text (optional) receives the
// human-readable summary.
TVC_API tvc_status tvc_oracle_run(const tvc_instance* instance,
                                  const char* output_dir,
                                  tvc_oracle_summary* out, char** text);

typedef struct tvc_fuzz_summary {
  uint64_t instances;
  uint64_t respected;
  uint64_t attempts;
  double max_bias;
} tvc_fuzz_summary;

TVC_API tvc_status tvc_fuzz_theorem(uint64_t seed, uint64_t count,
                                    const char* output_dir,
                                    tvc_fuzz_summary* out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // TVCBIAS_TVCBIAS_H_
