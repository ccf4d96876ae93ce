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

#include "mcfsim/mcfsim.h"

#include "mcfsim/config.hpp"
#include "mcfsim/error.hpp"

#include <cstring>
#include <new>
#include <optional>
#include <string>

struct mcf_config {
  mcfsim::RunConfig cfg;
};

struct mcf_model {
  mcfsim::Model model;
};

struct mcf_result {
  mcfsim::RunResult result;
};

struct mcf_env {
  mcfsim::RmscaEnv env;
  std::optional<std::uint64_t> next_seed;
  mcfsim::BlockingCounters counts;
};

namespace {

thread_local std::string g_last_error;

mcf_status fail(mcf_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps the C++ exception hierarchy onto status codes.
template <typename F>
mcf_status guarded(F&& fn) {
  try {
    return fn();
  } catch (const mcfsim::ValidationError& e) {
    return fail(MCF_ERR_VALIDATION, e.what());
  } catch (const mcfsim::ParseError& e) {
    return fail(MCF_ERR_PARSE, e.what());
  } catch (const mcfsim::StateError& e) {
    return fail(MCF_ERR_STATE, e.what());
  } catch (const mcfsim::Error& e) {
    return fail(MCF_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(MCF_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MCF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MCF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MCF_ERR_INTERNAL, "unknown error");
  }
}

mcf_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  if (cap < s.size() + 1) return fail(MCF_ERR_BUFFER_TOO_SMALL, "buffer too small");
  return MCF_OK;
}

mcf_counts to_counts(const mcfsim::BlockingCounters& c) {
  using mcfsim::BlockCause;
  return {c.offered,
          c.established,
          c.blocked_by(BlockCause::no_route),
          c.blocked_by(BlockCause::reach),
          c.blocked_by(BlockCause::spectrum),
          c.blocked_by(BlockCause::crosstalk),
          c.blocking_probability()};
}

int32_t to_c_cause(mcfsim::BlockCause cause) {
  switch (cause) {
  case mcfsim::BlockCause::none: return MCF_CAUSE_NONE;
  case mcfsim::BlockCause::no_route: return MCF_CAUSE_NO_ROUTE;
  case mcfsim::BlockCause::reach: return MCF_CAUSE_REACH;
  case mcfsim::BlockCause::spectrum: return MCF_CAUSE_SPECTRUM;
  case mcfsim::BlockCause::crosstalk: return MCF_CAUSE_CROSSTALK;
  }
  return MCF_CAUSE_NONE;
}

mcf_status write_observation(const std::vector<double>& obs, double* out, size_t cap) {
  if (!out) return MCF_OK;
  if (cap < obs.size()) return fail(MCF_ERR_BUFFER_TOO_SMALL, "observation buffer too small");
  std::copy(obs.begin(), obs.end(), out);
  return MCF_OK;
}

#define MCF_REQUIRE(ptr)                                                                          \
  do {                                                                                            \
    if (!(ptr)) return fail(MCF_ERR_INVALID_ARGUMENT, #ptr " is NULL");                           \
  } while (0)

} // namespace

extern "C" {

const char* mcf_version(void) { return "0.1.0"; }

const char* mcf_last_error(void) { return g_last_error.c_str(); }

const char* mcf_status_string(mcf_status status) {
  switch (status) {
  case MCF_OK: return "ok";
  case MCF_ERR_INVALID_ARGUMENT: return "invalid argument";
  case MCF_ERR_PARSE: return "parse error";
  case MCF_ERR_VALIDATION: return "validation error";
  case MCF_ERR_IO: return "i/o error";
  case MCF_ERR_STATE: return "invalid state";
  case MCF_ERR_BUFFER_TOO_SMALL: return "buffer too small";
  case MCF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mcf_cause_string(int32_t cause) {
  switch (cause) {
  case MCF_CAUSE_NONE: return "none";
  case MCF_CAUSE_NO_ROUTE: return "no_route";
  case MCF_CAUSE_REACH: return "reach";
  case MCF_CAUSE_SPECTRUM: return "spectrum";
  case MCF_CAUSE_CROSSTALK: return "crosstalk";
  default: return "unknown";
  }
}

mcf_status mcf_config_create(mcf_config** out) {
  MCF_REQUIRE(out);
  return guarded([&] {
    *out = new mcf_config{};
    return MCF_OK;
  });
}

mcf_status mcf_config_load(const char* path, mcf_config** out) {
  MCF_REQUIRE(path);
  MCF_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new mcf_config{mcfsim::load_config(path)};
    return MCF_OK;
  });
}

mcf_status mcf_config_parse(const char* text, mcf_config** out) {
  MCF_REQUIRE(text);
  MCF_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new mcf_config{mcfsim::parse_config(text)};
    return MCF_OK;
  });
}

mcf_status mcf_config_set(mcf_config* cfg, const char* key, const char* value) {
  MCF_REQUIRE(cfg);
  MCF_REQUIRE(key);
  MCF_REQUIRE(value);
  return guarded([&] {
    mcfsim::RunConfig next = cfg->cfg;
    mcfsim::apply_setting(next, key, value);
    cfg->cfg = std::move(next);
    return MCF_OK;
  });
}

mcf_status mcf_config_get(const mcf_config* cfg, const char* key, char* buf, size_t cap, size_t* needed) {
  MCF_REQUIRE(cfg);
  MCF_REQUIRE(key);
  return guarded([&] { return copy_out(mcfsim::setting_value(cfg->cfg, key), buf, cap, needed); });
}

mcf_status mcf_config_describe(const mcf_config* cfg, char* buf, size_t cap, size_t* needed) {
  MCF_REQUIRE(cfg);
  return guarded([&] { return copy_out(mcfsim::describe(cfg->cfg), buf, cap, needed); });
}

mcf_status mcf_config_diagnose(const mcf_config* cfg, char* buf, size_t cap, size_t* needed,
                               size_t* problems) {
  MCF_REQUIRE(cfg);
  return guarded([&] {
    const auto diags = mcfsim::diagnose(cfg->cfg);
    if (problems) *problems = diags.size();
    std::string text;
    for (const auto& d : diags) text += d.text() + "\n";
    return copy_out(text, buf, cap, needed);
  });
}

void mcf_config_destroy(mcf_config* cfg) { delete cfg; }

mcf_status mcf_model_create(const mcf_config* cfg, mcf_model** out) {
  MCF_REQUIRE(cfg);
  MCF_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new mcf_model{mcfsim::Model(cfg->cfg)};
    return MCF_OK;
  });
}

mcf_status mcf_model_topology_info(const mcf_model* model, int32_t* nodes, int32_t* links, int32_t* cores) {
  MCF_REQUIRE(model);
  const auto& t = *model->model.topology();
  if (nodes) *nodes = t.num_nodes();
  if (links) *links = static_cast<int32_t>(t.links().size());
  if (cores) *cores = t.cores();
  return MCF_OK;
}

void mcf_model_destroy(mcf_model* model) { delete model; }

mcf_status mcf_run(const mcf_model* model, double load_erlang, uint64_t seed, mcf_result** out) {
  MCF_REQUIRE(model);
  MCF_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new mcf_result{mcfsim::run_once(model->model, load_erlang, seed)};
    return MCF_OK;
  });
}

mcf_status mcf_result_counts(const mcf_result* result, mcf_counts* steady, mcf_counts* all) {
  MCF_REQUIRE(result);
  if (steady) *steady = to_counts(result->result.counters);
  if (all) *all = to_counts(result->result.all);
  return MCF_OK;
}

size_t mcf_result_window_count(const mcf_result* result) {
  return result ? result->result.windows.size() : 0;
}

mcf_status mcf_result_windows(const mcf_result* result, double* out, size_t cap) {
  MCF_REQUIRE(result);
  MCF_REQUIRE(out);
  const auto& w = result->result.windows;
  if (cap < w.size()) return fail(MCF_ERR_BUFFER_TOO_SMALL, "window buffer too small");
  std::copy(w.begin(), w.end(), out);
  return MCF_OK;
}

void mcf_result_destroy(mcf_result* result) { delete result; }

mcf_status mcf_env_create(const mcf_model* model, uint64_t seed, mcf_env** out) {
  MCF_REQUIRE(model);
  MCF_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const auto& m = model->model;
    *out = new mcf_env{mcfsim::RmscaEnv(m.topology(), m.engine_config(m.config().engine.traffic.load_erlang, seed),
                                        m.config().env, seed),
                       std::nullopt,
                       {}};
    return MCF_OK;
  });
}

size_t mcf_env_observation_size(const mcf_env* env) { return env ? env->env.observation_size() : 0; }

mcf_status mcf_env_action_shape(const mcf_env* env, int32_t shape[3]) {
  MCF_REQUIRE(env);
  MCF_REQUIRE(shape);
  const auto d = env->env.descriptor();
  for (int i = 0; i < 3; ++i) shape[i] = d.action_shape[static_cast<std::size_t>(i)];
  return MCF_OK;
}

mcf_status mcf_env_describe(const mcf_env* env, char* buf, size_t cap, size_t* needed) {
  MCF_REQUIRE(env);
  return guarded([&] { return copy_out(env->env.descriptor().to_json(), buf, cap, needed); });
}

mcf_status mcf_env_seed(mcf_env* env, uint64_t seed) {
  MCF_REQUIRE(env);
  env->next_seed = seed;
  return MCF_OK;
}

mcf_status mcf_env_reset(mcf_env* env, double* observation, size_t cap) {
  MCF_REQUIRE(env);
  if (observation && cap < env->env.observation_size())
    return fail(MCF_ERR_BUFFER_TOO_SMALL, "observation buffer too small");
  return guarded([&] {
    const auto obs = env->env.reset(env->next_seed);
    env->next_seed.reset();
    return write_observation(obs, observation, cap);
  });
}

mcf_status mcf_env_step(mcf_env* env, const int32_t action[3], double* observation, size_t cap,
                        double* reward, int32_t* done, mcf_step_info* info) {
  MCF_REQUIRE(env);
  MCF_REQUIRE(action);
  if (observation && cap < env->env.observation_size())
    return fail(MCF_ERR_BUFFER_TOO_SMALL, "observation buffer too small");
  return guarded([&] {
    const auto r = env->env.step({action[0], action[1], action[2]});
    env->counts.record(r.info.cause);
    if (reward) *reward = r.reward;
    if (done) *done = r.done ? 1 : 0;
    if (info)
      *info = {to_c_cause(r.info.cause), r.info.route_rank, r.info.core, r.info.block_start,
               r.info.block_size};
    return write_observation(r.observation, observation, cap);
  });
}

mcf_status mcf_env_counts(const mcf_env* env, mcf_counts* out) {
  MCF_REQUIRE(env);
  MCF_REQUIRE(out);
  *out = to_counts(env->counts);
  return MCF_OK;
}

void mcf_env_destroy(mcf_env* env) { delete env; }

} // extern "C"
