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

#pragma once

#include "mcfsim/engine.hpp"
#include "mcfsim/heuristics.hpp"
#include "mcfsim/rl_env.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mcfsim {

// Every tunable of a simulation, loadable from a flat `key = value` document.
struct RunConfig {
  std::string topology; // path to a topology document
  int k_paths = 5;      // routing.k
  EngineConfig engine;
  EnvConfig env;
  std::string policy = "ksp-ff-fca";
  std::vector<ScmaPartition> scma_partitions; // empty: defaults from slots/bitrates

  std::vector<double> loads{250.0};
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t requests = 10000;
  int workers = 1;

  std::vector<ScmaPartition> resolved_scma() const;
};

// Keys in the order describe() prints them.
const std::vector<std::string>& config_keys();

// Throws ValidationError(key, ...) for unknown keys or bad values and
// ParseError for malformed numbers.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

// `#` starts a comment; blank lines are ignored. A relative topology path is
// resolved against `base_dir` when given.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

struct Diagnostic {
  std::string key; // offending key path, e.g. "xt.pitch" or "links[3].length_km"
  std::string message;
  std::string text() const { return key + ": " + message; }
};

// Every violation found; empty when valid. Loads the topology file only if
// `check_topology`.
std::vector<Diagnostic> diagnose(const RunConfig& cfg, bool check_topology = true);
// Throws the first violation.
void validate(const RunConfig& cfg, bool check_topology = true);

// Resolved `key = value` lines for every key.
std::string describe(const RunConfig& cfg);
std::string setting_value(const RunConfig& cfg, std::string_view key);

std::unique_ptr<Policy> make_policy(const RunConfig& cfg, std::uint64_t seed);

// Topology plus resolved configuration. Immutable; share across runs.
class Model {
public:
  explicit Model(RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  std::shared_ptr<const Topology> topology() const { return topology_; }

  EngineConfig engine_config(double load, std::uint64_t seed) const;

private:
  RunConfig cfg_;
  std::shared_ptr<const Topology> topology_;
};

struct RunResult {
  double load = 0.0;
  std::string policy;
  std::uint64_t seed = 0;
  BlockingCounters counters; // steady-state
  BlockingCounters all;
  std::vector<double> windows;
};

// One heuristic run of cfg.requests arrivals.
RunResult run_heuristic(const Model& model, double load, std::uint64_t seed);
// Uniformly random multi-discrete actions through the environment.
RunResult run_random_agent(const Model& model, double load, std::uint64_t seed);
RunResult run_once(const Model& model, double load, std::uint64_t seed);

} // namespace mcfsim
