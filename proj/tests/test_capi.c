/*
 * Copyright 2026 The tvcbias Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Exercises the C interface from C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "tvcbias/tvcbias.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, \
              #cond);                                             \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_config(void) {
  tvc_config* cfg = NULL;
  char* text = NULL;
  EXPECT(tvc_config_create(&cfg) == TVC_OK);
  EXPECT(tvc_config_set(cfg, "sir.beta", "0.3") == TVC_OK);
  EXPECT(tvc_config_set(cfg, "experiment.seed", "99") == TVC_OK);
  EXPECT(tvc_config_seed(cfg) == 99);
  EXPECT(tvc_config_dump(cfg, &text) == TVC_OK);
  EXPECT(text != NULL && strstr(text, "beta = 0.29999999999999999") != NULL);
  tvc_string_free(text);

  EXPECT(tvc_config_set(cfg, "sir.nope", "1") == TVC_ERR_CONFIG);
  EXPECT(strstr(tvc_last_error(), "sir.nope") != NULL);
  EXPECT(tvc_config_set(cfg, "experiment.thresholds", "0.3,0.2") == TVC_OK);
  EXPECT(tvc_config_validate(cfg) == TVC_ERR_CONFIG);
  EXPECT(tvc_config_set(cfg, NULL, "1") == TVC_ERR_INVALID_ARGUMENT);
  tvc_config_destroy(cfg);

  cfg = NULL;
  EXPECT(tvc_config_load("/nonexistent/config.ini", &cfg) == TVC_ERR_CONFIG);
  EXPECT(cfg == NULL);
  tvc_config_destroy(NULL);
}

static void test_oracle(void) {
  tvc_instance* inst = NULL;
  tvc_oracle_summary s;
  EXPECT(tvc_instance_load("coin-epidemic", &inst) == TVC_OK);
  EXPECT(tvc_oracle_evaluate(inst, &s) == TVC_OK);
  EXPECT(fabs(s.g_formula - 1.1) < 1e-12);
  EXPECT(fabs(s.associational - 0.6) < 1e-12);
  EXPECT(fabs(s.bias + 0.5) < 1e-12);
  EXPECT(s.opportunistic_everywhere == 1);
  EXPECT(s.theorem_respected == 1);
  EXPECT(s.monotone_process == 1);
  tvc_instance_destroy(inst);

  inst = NULL;
  EXPECT(tvc_instance_load("/nonexistent.json", &inst) != TVC_OK);
  EXPECT(strlen(tvc_last_error()) > 0);
}

static void test_runs(const char* dir) {
  tvc_config* cfg = NULL;
  tvc_threshold_summary rows[4];
  size_t count = 0;
  tvc_fuzz_summary fuzz;
  EXPECT(tvc_config_create(&cfg) == TVC_OK);
  tvc_config_set(cfg, "sir.population", "10000");
  tvc_config_set(cfg, "sir.initial_infected", "20");
  tvc_config_set(cfg, "sir.horizon", "20");
  tvc_config_set(cfg, "experiment.replicates", "2000");
  tvc_config_set(cfg, "experiment.thresholds", "0.001,0.3");
  tvc_config_set(cfg, "experiment.out", dir);
  EXPECT(tvc_run_figure2(cfg) == TVC_OK);
  EXPECT(tvc_run_figures34(cfg, rows, 4, &count) == TVC_OK);
  EXPECT(count == 2);
  EXPECT(rows[0].retained == 0);
  EXPECT(isnan(rows[0].bias_T));
  EXPECT(rows[1].retained > 0);
  EXPECT(rows[1].total == 2000);
  EXPECT(rows[1].bias_T == rows[1].associational_T - rows[1].causal_T);

  tvc_config_set(cfg, "experiment.thresholds", "0.001");
  EXPECT(tvc_run_figures34(cfg, NULL, 0, &count) ==
         TVC_ERR_EMPTY_CONDITIONING);
  tvc_config_destroy(cfg);

  EXPECT(tvc_fuzz_theorem(1, 5, dir, &fuzz) == TVC_OK);
  EXPECT(fuzz.instances == 5 && fuzz.respected == 5);
  EXPECT(fuzz.max_bias < 0.0);
}

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : "capi-out";
  EXPECT(strcmp(tvc_version(), "1.0.0") == 0);
  EXPECT(strcmp(tvc_status_name(TVC_ERR_IO), "I/O error") == 0);
  test_config();
  test_oracle();
  test_runs(dir);
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return EXIT_FAILURE;
  }
  puts("C API checks passed");
  return EXIT_SUCCESS;
}
