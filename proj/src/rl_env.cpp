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

#include "mcfsim/rl_env.hpp"

#include "mcfsim/error.hpp"

#include <algorithm>

#include "json.hpp"

namespace mcfsim {

void EnvConfig::validate() const {
  if (requests_per_episode < 1) throw ValidationError("env.requests_per_episode", "must be >= 1");
  if (blocks_per_core < 1) throw ValidationError("env.blocks", "must be >= 1");
  if (features_per_block != 1 && features_per_block != 3)
    throw ValidationError("env.features", "must be 1 or 3");
}

std::string EnvDescriptor::to_json() const {
  nlohmann::json j;
  j["id"] = kEnvironmentId;
  j["action_space"] = {{"type", "multi_discrete"}, {"shape", action_shape}};
  j["observation_size"] = observation_size;
  j["reward_range"] = {reward_min, reward_max};
  j["requests_per_episode"] = requests_per_episode;
  j["info_keys"] = {"cause", "route_rank", "core", "block_start", "block_size"};
  return j.dump();
}

namespace {

EngineConfig seeded(EngineConfig cfg, std::uint64_t seed) {
  cfg.traffic.seed = seed;
  cfg.warmup_fraction = 0.0;
  return cfg;
}

double normalized_index(int value, int range) { return range > 1 ? double(value) / (range - 1) : 0.0; }

} // namespace

RmscaEnv::RmscaEnv(std::shared_ptr<const Topology> topology, EngineConfig engine, EnvConfig env,
                   std::uint64_t seed)
    : env_(env), sim_(std::move(topology), seeded(std::move(engine), seed)),
      k_(sim_.topology().k_paths()), cores_(sim_.topology().cores()) {
  env_.validate();
}

std::size_t RmscaEnv::observation_size() const {
  const auto n = static_cast<std::size_t>(sim_.topology().num_nodes());
  return 2 * n + 2 +
         static_cast<std::size_t>(k_) * static_cast<std::size_t>(cores_) *
             static_cast<std::size_t>(env_.blocks_per_core) *
             static_cast<std::size_t>(env_.features_per_block) +
         4;
}

EnvDescriptor RmscaEnv::descriptor() const {
  EnvDescriptor d;
  const int third = env_.action_mode == ActionMode::block_index ? env_.blocks_per_core
                                                                 : sim_.grid().slots();
  d.action_shape = {k_, cores_, third};
  d.observation_size = observation_size();
  d.requests_per_episode = env_.requests_per_episode;
  return d;
}

std::optional<SlotDemand> RmscaEnv::demand_on(int route) const {
  const auto& routes = sim_.routes_for(pending_);
  if (route < 0 || route >= static_cast<int>(routes.size())) return std::nullopt;
  const auto m = sim_.modulation_for(routes[static_cast<std::size_t>(route)]);
  if (!m) return std::nullopt;
  return sim_.demand_for(pending_, *m);
}

std::vector<double> RmscaEnv::reset(std::optional<std::uint64_t> seed) {
  if (seed)
    sim_.reset(seed);
  else if (env_.reset_state_on_episode || !started_) {
    sim_.clear_network();
    sim_.reset_stats();
  }
  pending_ = sim_.next_arrival();
  started_ = true;
  step_ = 0;
  return_ = 0.0;
  last_reward_ = 0.0;
  last_action_.reset();
  return build_observation();
}

Decision RmscaEnv::decode(const RmscaAction& a) const {
  Decision d{a.k, a.c, a.j};
  if (env_.action_mode == ActionMode::absolute_slot) return d;
  // Block-index mode: j picks among the blocks advertised in the observation.
  const auto demand = demand_on(a.k);
  if (!demand || a.c < 0 || a.c >= cores_) {
    d.start = 0; // engine reports no_route / reach / spectrum
    return d;
  }
  if (a.j < 0 || a.j >= env_.blocks_per_core) {
    d.start = -1;
    return d;
  }
  const auto& route = sim_.routes_for(pending_)[static_cast<std::size_t>(a.k)];
  const auto blocks = sim_.grid().find_blocks(route, a.c, demand->total(), env_.blocks_per_core);
  d.start = a.j < static_cast<int>(blocks.size()) ? blocks[static_cast<std::size_t>(a.j)].start : -1;
  return d;
}

StepResult RmscaEnv::step(const RmscaAction& a) {
  if (!started_) throw StateError("step before reset");
  if (done()) throw StateError("episode finished; call reset");

  const AllocationOutcome outcome = sim_.try_establish(pending_, decode(a));
  StepResult r;
  r.reward = outcome.established() ? 1.0 : -1.0;
  r.info = {outcome.cause, outcome.route_rank, outcome.core,
            outcome.core >= 0 ? outcome.block.start : -1, outcome.core >= 0 ? outcome.block.size : 0};
  ++step_;
  return_ += r.reward;
  last_reward_ = r.reward;
  last_action_ = a;
  pending_ = sim_.next_arrival();
  r.done = done();
  r.observation = build_observation();
  return r;
}

std::vector<double> RmscaEnv::build_observation() const {
  std::vector<double> obs;
  obs.reserve(observation_size());
  const int n = sim_.topology().num_nodes();
  const int slots = sim_.grid().slots();
  const double s_norm = slots > 0 ? 1.0 / slots : 0.0;

  for (int v = 0; v < n; ++v) obs.push_back(v == pending_.src ? 1.0 : 0.0);
  for (int v = 0; v < n; ++v) obs.push_back(v == pending_.dst ? 1.0 : 0.0);
  obs.push_back(std::min(1.0, pending_.holding_time / (10.0 * sim_.config().traffic.mean_holding)));
  const auto first = demand_on(0);
  obs.push_back(first ? std::min(1.0, first->total() * s_norm) : 0.0);

  const auto& routes = sim_.routes_for(pending_);
  const int jn = env_.blocks_per_core;
  for (int k = 0; k < k_; ++k) {
    const auto demand = demand_on(k);
    for (int c = 0; c < cores_; ++c) {
      std::vector<SlotBlock> blocks;
      if (demand)
        blocks = sim_.grid().find_blocks(routes[static_cast<std::size_t>(k)], c, demand->total(), jn);
      for (int j = 0; j < jn; ++j) {
        const bool have = j < static_cast<int>(blocks.size());
        if (env_.features_per_block == 3) {
          obs.push_back(have ? blocks[static_cast<std::size_t>(j)].start * s_norm : -1.0);
          obs.push_back(have ? blocks[static_cast<std::size_t>(j)].size * s_norm : -1.0);
        }
        obs.push_back(have ? 1.0 : 0.0);
      }
    }
  }

  if (last_action_) {
    const int third = env_.action_mode == ActionMode::block_index ? jn : slots;
    const auto clip = [](double x) { return std::clamp(x, -1.0, 1.0); };
    obs.push_back(clip(normalized_index(last_action_->k, k_)));
    obs.push_back(clip(normalized_index(last_action_->c, cores_)));
    obs.push_back(clip(normalized_index(last_action_->j, third)));
  } else {
    obs.insert(obs.end(), 3, -1.0);
  }
  obs.push_back(env_.reward_field == RewardField::previous ? last_reward_
                                                           : return_ / env_.requests_per_episode);
  return obs;
}

} // namespace mcfsim
