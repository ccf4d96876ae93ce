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

/* C interface to the multicore-fiber elastic optical network simulator.
 *
 * All objects are opaque handles created by *_create / *_load and released
 * by the matching *_destroy. Every fallible call returns an mcf_status; on
 * failure mcf_last_error() describes the problem (per thread, valid until
 * the next failing call on that thread).
 *
 * Strings are returned through caller buffers: the call writes at most
 * cap - 1 bytes plus a terminating NUL, stores the full size including the
 * NUL in *needed (if non-NULL) and returns MCF_ERR_BUFFER_TOO_SMALL when
 * cap is insufficient. Pass buf = NULL, cap = 0 to query the size.
 *
 * A model is immutable and may be shared by concurrent mcf_run calls. An
 * env must not be used from two threads at once.
 */
#ifndef MCFSIM_H
#define MCFSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MCF_BUILDING_LIB)
#    define MCF_API __declspec(dllexport)
#  else
#    define MCF_API __declspec(dllimport)
#  endif
#else
#  define MCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcf_status {
  MCF_OK = 0,
  MCF_ERR_INVALID_ARGUMENT = 1,
  MCF_ERR_PARSE = 2,
  MCF_ERR_VALIDATION = 3,
  MCF_ERR_IO = 4,
  MCF_ERR_STATE = 5,
  MCF_ERR_BUFFER_TOO_SMALL = 6,
  MCF_ERR_INTERNAL = 7
} mcf_status;

typedef enum mcf_cause {
  MCF_CAUSE_NONE = 0,
  MCF_CAUSE_NO_ROUTE = 1,
  MCF_CAUSE_REACH = 2,
  MCF_CAUSE_SPECTRUM = 3,
  MCF_CAUSE_CROSSTALK = 4
} mcf_cause;

typedef struct mcf_config mcf_config;
typedef struct mcf_model mcf_model;
typedef struct mcf_result mcf_result;
typedef struct mcf_env mcf_env;

typedef struct mcf_counts {
  uint64_t offered;
  uint64_t established;
  uint64_t blocked_no_route;
  uint64_t blocked_reach;
  uint64_t blocked_spectrum;
  uint64_t blocked_crosstalk;
  double blocking_probability;
} mcf_counts;

typedef struct mcf_step_info {
  int32_t cause; /* mcf_cause */
  int32_t route_rank; /* 1-based, 0 if unresolved */
  int32_t core; /* -1 if unresolved */
  int32_t block_start; /* 0-based slot, -1 if unresolved */
  int32_t block_size;
} mcf_step_info;

MCF_API const char* mcf_version(void);
MCF_API const char* mcf_last_error(void);
MCF_API const char* mcf_status_string(mcf_status status);
MCF_API const char* mcf_cause_string(int32_t cause);

/* Configuration: flat key = value settings, defaults for every key. */
MCF_API mcf_status mcf_config_create(mcf_config** out);
MCF_API mcf_status mcf_config_load(const char* path, mcf_config** out);
MCF_API mcf_status mcf_config_parse(const char* text, mcf_config** out);
MCF_API mcf_status mcf_config_set(mcf_config* cfg, const char* key, const char* value);
MCF_API mcf_status mcf_config_get(const mcf_config* cfg, const char* key, char* buf, size_t cap,
                                  size_t* needed);
/* Every resolved key = value line. */
MCF_API mcf_status mcf_config_describe(const mcf_config* cfg, char* buf, size_t cap, size_t* needed);
/* One "key: message" line per violation; *problems receives the count. */
MCF_API mcf_status mcf_config_diagnose(const mcf_config* cfg, char* buf, size_t cap, size_t* needed,
                                       size_t* problems);
MCF_API void mcf_config_destroy(mcf_config* cfg);

/* Model: validated configuration plus loaded topology and routes. */
MCF_API mcf_status mcf_model_create(const mcf_config* cfg, mcf_model** out);
MCF_API mcf_status mcf_model_topology_info(const mcf_model* model, int32_t* nodes, int32_t* links,
                                           int32_t* cores);
MCF_API void mcf_model_destroy(mcf_model* model);

/* One simulation of the configured policy and request count. */
MCF_API mcf_status mcf_run(const mcf_model* model, double load_erlang, uint64_t seed,
                           mcf_result** out);
/* steady: requests after warm-up; all: every request. Either may be NULL. */
MCF_API mcf_status mcf_result_counts(const mcf_result* result, mcf_counts* steady, mcf_counts* all);
MCF_API size_t mcf_result_window_count(const mcf_result* result);
MCF_API mcf_status mcf_result_windows(const mcf_result* result, double* out, size_t cap);
MCF_API void mcf_result_destroy(mcf_result* result);

/* Agent environment. */
MCF_API mcf_status mcf_env_create(const mcf_model* model, uint64_t seed, mcf_env** out);
MCF_API size_t mcf_env_observation_size(const mcf_env* env);
MCF_API mcf_status mcf_env_action_shape(const mcf_env* env, int32_t shape[3]);
/* JSON descriptor: id, action_space, observation_size, reward_range, info_keys. */
MCF_API mcf_status mcf_env_describe(const mcf_env* env, char* buf, size_t cap, size_t* needed);
/* The next reset restarts traffic from this seed. */
MCF_API mcf_status mcf_env_seed(mcf_env* env, uint64_t seed);
MCF_API mcf_status mcf_env_reset(mcf_env* env, double* observation, size_t cap);
MCF_API mcf_status mcf_env_step(mcf_env* env, const int32_t action[3], double* observation,
                                size_t cap, double* reward, int32_t* done, mcf_step_info* info);
/* Outcomes of every step since creation. */
MCF_API mcf_status mcf_env_counts(const mcf_env* env, mcf_counts* out);
MCF_API void mcf_env_destroy(mcf_env* env);

#ifdef __cplusplus
}
#endif

#endif /* MCFSIM_H */
