// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#ifndef HETNET_HETNET_H
#define HETNET_HETNET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define HN_API __declspec(dllexport)
#else
#define HN_API __attribute__((visibility("default")))
#endif

typedef enum hn_status {
  HN_OK = 0,
  HN_ERR_INVALID_ARGUMENT = 1,
  HN_ERR_CONFIG = 2,
  HN_ERR_IO = 3,
  HN_ERR_TOO_LARGE = 4,
  HN_ERR_INTERNAL = 5
} hn_status;

typedef struct hn_config hn_config;
typedef struct hn_policy hn_policy;

typedef struct hn_scheme_summary {
  double mean_total_gbps;
  double mean_effective_gbps;
  double effective_ratio;
  double mean_beta_sum;
  int effective_steps;
  int n_steps;
  uint64_t trace_hash;
} hn_scheme_summary;

HN_API const char* hn_version(void);
/* Message of the last failing call on this thread; "" after success. */
HN_API const char* hn_last_error(void);
/* 0 debug, 1 info, 2 warning, 3 error. */
HN_API void hn_set_log_level(int level);
HN_API void hn_string_free(char* s);

HN_API hn_status hn_config_default(hn_config** out);
HN_API hn_status hn_config_full_scale(hn_config** out);
HN_API hn_status hn_config_load(const char* path, hn_config** out);
HN_API hn_status hn_config_parse(const char* yaml, hn_config** out);
/* "dotted.key=value"; the config is unchanged on failure. */
HN_API hn_status hn_config_set(hn_config* cfg, const char* assignment);
/* Applies all assignments, then validates once; all or nothing. */
HN_API hn_status hn_config_set_many(hn_config* cfg, const char* const* assignments, size_t count);
HN_API hn_status hn_config_dump(const hn_config* cfg, char** out_yaml);
HN_API hn_status hn_config_hash(const hn_config* cfg, uint64_t* out);
HN_API void hn_config_free(hn_config* cfg);

HN_API hn_status hn_policy_load(const char* path, hn_policy** out);
HN_API hn_status hn_policy_save(const hn_policy* policy, const char* path);
HN_API size_t hn_policy_agents(const hn_policy* policy);
HN_API void hn_policy_free(hn_policy* policy);

/* Trains MADDQN on the configured scenario without writing files. */
HN_API hn_status hn_train(const hn_config* cfg, hn_policy** out);

/* Full run: trains (or uses `policy` when non-null), evaluates every
 * configured scheme and writes the CSV set. `out_policy` may be null. */
HN_API hn_status hn_run_experiment(const hn_config* cfg, const hn_policy* policy, hn_policy** out_policy);

/* Evaluates one scheme ("maddqn" needs `policy`) without writing files. */
HN_API hn_status hn_evaluate_scheme(const hn_config* cfg, const hn_policy* policy, const char* scheme,
                                    hn_scheme_summary* out);

HN_API hn_status hn_sweep_delta(const hn_config* cfg);
HN_API hn_status hn_sweep_ues(const hn_config* cfg);
HN_API hn_status hn_sweep_sbs(const hn_config* cfg);

/* Exhaustive optimum on the first evaluation realization. `assoc` and
 * `blocks` receive n_ue entries when non-null; `n_ue` receives the count. */
HN_API hn_status hn_oracle(const hn_config* cfg, double* best_total_bps, int* assoc, int* blocks, size_t capacity,
                           size_t* n_ue, uint64_t* evaluated);

HN_API hn_status hn_link_state_probs(double distance_m, double a_los, double a_out, double b_out, double out[3]);
HN_API hn_status hn_free_space_db(double carrier_hz, double ref_distance_m, double* out);

#ifdef __cplusplus
}
#endif

#endif
