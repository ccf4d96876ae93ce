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

#include "mcfsim/physics.hpp"
#include "mcfsim/spectrum.hpp"
#include "mcfsim/topology.hpp"
#include "mcfsim/traffic.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

namespace mcfsim {

enum class BlockCause { none, no_route, reach, spectrum, crosstalk };
inline constexpr std::array<BlockCause, 4> kBlockCauses{BlockCause::no_route, BlockCause::reach,
                                                        BlockCause::spectrum, BlockCause::crosstalk};
std::string_view to_string(BlockCause cause);

struct PhysicsConfig {
  XtParams xt;
  // Count only neighbour cores whose occupied slots overlap the block.
  bool occupancy_aware = false;
  std::vector<ModulationFormat> enabled = default_enabled_modulations();
  double slot_ghz = 12.5;
  int guard_slots = 1;

  void validate() const;
};

struct EngineConfig {
  int slots = 100;
  PhysicsConfig physics;
  TrafficConfig traffic;
  int window_size = 1000;
  // Leading share of a run's requests left out of the steady-state counters.
  double warmup_fraction = 0.1;

  void validate() const;
};

// Route index (0-based rank), core and absolute first slot of the block.
struct Decision {
  int route = 0;
  int core = 0;
  int start = 0;

  bool operator==(const Decision&) const = default;
};

struct AllocationOutcome {
  BlockCause cause = BlockCause::none;
  ConnectionId id = 0;
  // Resolved resources; rank 0 / core -1 / size 0 where unresolved.
  int route_rank = 0;
  int core = -1;
  SlotBlock block{};
  std::optional<ModulationFormat> modulation;

  bool established() const { return cause == BlockCause::none; }
};

struct BlockingCounters {
  std::uint64_t offered = 0;
  std::uint64_t established = 0;
  std::array<std::uint64_t, 4> blocked{}; // indexed like kBlockCauses

  std::uint64_t blocked_by(BlockCause cause) const;
  std::uint64_t blocked_total() const;
  double blocking_probability() const;
  void record(BlockCause cause);
  bool conserved() const { return offered == established + blocked_total(); }
};

struct BlockingStats {
  BlockingCounters all;
  BlockingCounters steady; // requests past the warm-up prefix
  int window_size = 1000;
  std::vector<double> windows; // completed windows only
  std::uint64_t window_offered = 0;
  std::uint64_t window_blocked = 0;
};

struct ActiveConnection {
  ConnectionRequest request;
  int route_rank = 1;
  int core = 0;
  SlotBlock block;
  ModulationFormat modulation;
  double departure_time = 0.0;
};

struct SimEvent {
  enum class Kind { arrival, departure } kind = Kind::arrival;
  double time = 0.0;
  ConnectionId id = 0;
  AllocationOutcome outcome; // arrivals only
};

class Simulator;

struct PolicyChoice {
  std::optional<Decision> decision;
  BlockCause cause = BlockCause::spectrum; // when no decision
};

class Policy {
public:
  virtual ~Policy() = default;
  virtual PolicyChoice decide(const Simulator& sim, const ConnectionRequest& req) = 0;
  virtual std::string_view name() const = 0;
};

using EventObserver = std::function<void(const Simulator&, const SimEvent&)>;

// Event-driven MCF-EON simulator: arrivals from the traffic generator,
// departures from a time-ordered queue, and the validation pipeline
// route -> reach -> spectrum -> crosstalk for every proposed decision.
class Simulator {
public:
  Simulator(std::shared_ptr<const Topology> topology, EngineConfig cfg);

  const Topology& topology() const { return *topology_; }
  std::shared_ptr<const Topology> topology_ptr() const { return topology_; }
  const EngineConfig& config() const { return cfg_; }
  const SpectrumGrid& grid() const { return grid_; }
  const BlockingStats& stats() const { return stats_; }
  const std::map<ConnectionId, ActiveConnection>& active() const { return active_; }
  double now() const { return now_; }
  std::size_t pending_departures() const { return departures_.size(); }

  // Processes every departure due at or before the next arrival, then returns
  // that arrival.
  ConnectionRequest next_arrival();

  AllocationOutcome try_establish(const ConnectionRequest& req, const Decision& d);
  // Counts a request the policy rejected without proposing a decision.
  AllocationOutcome record_blocked(const ConnectionRequest& req, BlockCause cause);
  // Throws StateError if `id` is not active.
  void process_departure(ConnectionId id);

  BlockingStats run(Policy& policy, std::uint64_t num_requests);

  void set_observer(EventObserver observer) { observer_ = std::move(observer); }
  // Requests with ordinal below this stay out of stats().steady.
  void set_warmup(std::uint64_t requests) { warmup_ = requests; }

  // Clears network state, pending departures and stats; restarts traffic.
  void reset(std::optional<std::uint64_t> seed = std::nullopt);
  void reset_stats();
  // Drops every connection and pending departure; traffic continues.
  void clear_network();

  // Shared feasibility pieces, also used by the heuristics.
  const std::vector<RoutePath>& routes_for(const ConnectionRequest& req) const;
  std::optional<ModulationFormat> modulation_for(const RoutePath& route) const;
  SlotDemand demand_for(const ConnectionRequest& req, const ModulationFormat& m) const;
  double crosstalk_db(const RoutePath& route, int core, SlotBlock block) const;
  bool crosstalk_ok(const RoutePath& route, int core, SlotBlock block,
                    const ModulationFormat& m) const;
  // True when crosstalk does not depend on which slots are picked.
  bool crosstalk_slot_independent() const { return !cfg_.physics.occupancy_aware; }

private:
  struct Pending {
    double time;
    std::uint64_t seq;
    ConnectionId id;
    bool operator>(const Pending& o) const {
      return time != o.time ? time > o.time : seq > o.seq;
    }
  };

  void record(const AllocationOutcome& outcome);
  void notify(const SimEvent& e) const;

  std::shared_ptr<const Topology> topology_;
  EngineConfig cfg_;
  double xt_h_;
  SpectrumGrid grid_;
  TrafficGenerator traffic_;
  std::map<ConnectionId, ActiveConnection> active_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> departures_;
  std::uint64_t departure_seq_ = 0;
  BlockingStats stats_;
  std::uint64_t warmup_ = 0;
  double now_ = 0.0;
  EventObserver observer_;
};

} // namespace mcfsim
