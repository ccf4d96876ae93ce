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

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mcfsim {

enum class ActionMode { block_index, absolute_slot };
enum class RewardField { previous, cumulative };

struct EnvConfig {
  int requests_per_episode = 50;
  bool reset_state_on_episode = true;
  ActionMode action_mode = ActionMode::block_index;
  int blocks_per_core = 1;    // J
  int features_per_block = 3; // 3: start, size, availability; 1: availability
  RewardField reward_field = RewardField::previous;

  void validate() const;
};

// Multi-discrete action: route index k, core c, and j, which is either the
// index of an advertised block or an absolute first slot (see ActionMode).
struct RmscaAction {
  int k = 0;
  int c = 0;
  int j = 0;
};

struct StepInfo {
  BlockCause cause = BlockCause::none;
  int route_rank = 0;
  int core = -1;
  int block_start = -1;
  int block_size = 0;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

struct EnvDescriptor {
  std::array<int, 3> action_shape{};
  std::size_t observation_size = 0;
  double reward_min = -1.0;
  double reward_max = 1.0;
  int requests_per_episode = 0;

  std::string to_json() const;
};

inline constexpr const char* kEnvironmentId = "DeepRMSCA-v0";

// Agent-facing episode loop over a Simulator. Observation layout:
//   src one-hot (N) | dst one-hot (N) | holding time | requested slots |
//   routes state (K * C * J * F) | previous action (3) | previous reward
// so its length is 2N + 2 + K*C*J*F + 4.
class RmscaEnv {
public:
  RmscaEnv(std::shared_ptr<const Topology> topology, EngineConfig engine, EnvConfig env,
           std::uint64_t seed);

  std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt);
  // Throws StateError when called before reset() or after the episode ended.
  StepResult step(const RmscaAction& a);

  std::vector<double> build_observation() const;
  std::size_t observation_size() const;
  EnvDescriptor descriptor() const;

  const Simulator& simulator() const { return sim_; }
  const EnvConfig& config() const { return env_; }
  const ConnectionRequest& pending() const { return pending_; }
  int episode_step() const { return step_; }
  double episode_return() const { return return_; }
  bool done() const { return step_ >= env_.requests_per_episode; }

  // Decision the action maps to for the pending request.
  Decision decode(const RmscaAction& a) const;

private:
  std::optional<SlotDemand> demand_on(int route) const;

  EnvConfig env_;
  Simulator sim_;
  int k_;
  int cores_;
  ConnectionRequest pending_;
  bool started_ = false;
  int step_ = 0;
  double return_ = 0.0;
  double last_reward_ = 0.0;
  std::optional<RmscaAction> last_action_;
};

} // namespace mcfsim
