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

#include "mcfsim/engine.hpp"

#include "mcfsim/error.hpp"

#include <algorithm>
#include <cmath>

namespace mcfsim {

std::string_view to_string(BlockCause cause) {
  switch (cause) {
  case BlockCause::none: return "none";
  case BlockCause::no_route: return "no_route";
  case BlockCause::reach: return "reach";
  case BlockCause::spectrum: return "spectrum";
  case BlockCause::crosstalk: return "crosstalk";
  }
  return "unknown";
}

namespace {

std::size_t cause_index(BlockCause cause) {
  switch (cause) {
  case BlockCause::no_route: return 0;
  case BlockCause::reach: return 1;
  case BlockCause::spectrum: return 2;
  case BlockCause::crosstalk: return 3;
  case BlockCause::none: break;
  }
  throw std::invalid_argument("cause_index: not a blocking cause");
}

} // namespace

std::uint64_t BlockingCounters::blocked_by(BlockCause cause) const {
  return blocked[cause_index(cause)];
}

std::uint64_t BlockingCounters::blocked_total() const {
  std::uint64_t sum = 0;
  for (auto b : blocked) sum += b;
  return sum;
}

double BlockingCounters::blocking_probability() const {
  return offered == 0 ? 0.0 : static_cast<double>(blocked_total()) / static_cast<double>(offered);
}

void BlockingCounters::record(BlockCause cause) {
  ++offered;
  if (cause == BlockCause::none)
    ++established;
  else
    ++blocked[cause_index(cause)];
}

void PhysicsConfig::validate() const {
  xt.validate();
  if (enabled.empty()) throw ValidationError("modulation.enabled", "at least one format required");
  if (!(slot_ghz > 0.0)) throw ValidationError("slot_ghz", "must be > 0");
  if (guard_slots < 0) throw ValidationError("guard_slots", "must be >= 0");
}

void EngineConfig::validate() const {
  if (slots < 0) throw ValidationError("slots", "must be >= 0");
  physics.validate();
  traffic.validate();
  if (window_size < 1) throw ValidationError("stats.window", "must be >= 1");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw ValidationError("stats.warmup_fraction", "must lie in [0, 1)");
}

namespace {

EngineConfig validated(EngineConfig cfg) {
  cfg.validate();
  return cfg;
}

} // namespace

Simulator::Simulator(std::shared_ptr<const Topology> topology, EngineConfig cfg)
    : topology_(std::move(topology)), cfg_(validated(std::move(cfg))),
      xt_h_(mean_xt_per_length(cfg_.physics.xt)),
      grid_(static_cast<int>(topology_->links().size()), topology_->cores(), cfg_.slots),
      traffic_(topology_->num_nodes(), cfg_.traffic) {
  stats_.window_size = cfg_.window_size;
}

const std::vector<RoutePath>& Simulator::routes_for(const ConnectionRequest& req) const {
  return topology_->routes(req.src, req.dst);
}

std::optional<ModulationFormat> Simulator::modulation_for(const RoutePath& route) const {
  return select_modulation(route.length_km, cfg_.physics.enabled);
}

SlotDemand Simulator::demand_for(const ConnectionRequest& req, const ModulationFormat& m) const {
  return required_slots(req.bitrate_gbps, m, cfg_.physics.guard_slots, cfg_.physics.slot_ghz);
}

double Simulator::crosstalk_db(const RoutePath& route, int core, SlotBlock block) const {
  std::vector<double> lengths;
  std::vector<int> neighbours;
  lengths.reserve(route.links.size());
  neighbours.reserve(route.links.size());
  const int degree = topology_->core_adjacency();
  for (LinkId l : route.links) {
    lengths.push_back(topology_->link(l).length_km);
    if (!cfg_.physics.occupancy_aware) {
      neighbours.push_back(degree);
      continue;
    }
    int busy = 0;
    for (int c = 0; c < grid_.cores(); ++c)
      if (c != core && grid_.occupancy(l, c).any_in(block.start, block.end())) ++busy;
    neighbours.push_back(std::min(busy, degree));
  }
  return xt_db_over_links(lengths, xt_h_, neighbours);
}

bool Simulator::crosstalk_ok(const RoutePath& route, int core, SlotBlock block,
                             const ModulationFormat& m) const {
  return xt_feasible(crosstalk_db(route, core, block), m);
}

void Simulator::record(const AllocationOutcome& outcome) {
  const std::uint64_t ordinal = stats_.all.offered;
  stats_.all.record(outcome.cause);
  if (ordinal >= warmup_) stats_.steady.record(outcome.cause);
  ++stats_.window_offered;
  if (!outcome.established()) ++stats_.window_blocked;
  if (stats_.window_offered == static_cast<std::uint64_t>(stats_.window_size)) {
    stats_.windows.push_back(static_cast<double>(stats_.window_blocked) /
                             static_cast<double>(stats_.window_offered));
    stats_.window_offered = 0;
    stats_.window_blocked = 0;
  }
}

void Simulator::notify(const SimEvent& e) const {
  if (observer_) observer_(*this, e);
}

ConnectionRequest Simulator::next_arrival() {
  ConnectionRequest req = traffic_.next();
  // Departures at the same instant go first.
  while (!departures_.empty() && departures_.top().time <= req.arrival_time)
    process_departure(departures_.top().id);
  now_ = req.arrival_time;
  return req;
}

AllocationOutcome Simulator::try_establish(const ConnectionRequest& req, const Decision& d) {
  AllocationOutcome out;
  const auto finish = [&](BlockCause cause) {
    out.cause = cause;
    record(out);
    notify({SimEvent::Kind::arrival, req.arrival_time, req.id, out});
    return out;
  };

  // 1. route
  if (d.route < 0 || d.route >= topology_->k_paths()) return finish(BlockCause::spectrum);
  const auto& routes = routes_for(req);
  if (d.route >= static_cast<int>(routes.size())) return finish(BlockCause::no_route);
  const RoutePath& route = routes[static_cast<std::size_t>(d.route)];
  out.route_rank = route.rank;

  // 2. reach
  auto m = modulation_for(route);
  if (!m) return finish(BlockCause::reach);
  out.modulation = m;

  // 3. demand, 4. spectrum
  const SlotDemand demand = demand_for(req, *m);
  if (d.core < 0 || d.core >= grid_.cores()) return finish(BlockCause::spectrum);
  out.core = d.core;
  out.block = SlotBlock{d.start, demand.total()};
  if (!grid_.window_free(route, d.core, out.block)) return finish(BlockCause::spectrum);

  // 5. crosstalk
  if (!crosstalk_ok(route, d.core, out.block, *m)) return finish(BlockCause::crosstalk);

  // 6. commit
  grid_.allocate(route, d.core, out.block, req.id);
  ActiveConnection conn{req, route.rank, d.core, out.block, *m, req.arrival_time + req.holding_time};
  active_.emplace(req.id, conn);
  departures_.push({conn.departure_time, departure_seq_++, req.id});
  out.id = req.id;
  return finish(BlockCause::none);
}

AllocationOutcome Simulator::record_blocked(const ConnectionRequest& req, BlockCause cause) {
  if (cause == BlockCause::none) throw std::invalid_argument("record_blocked: cause is none");
  AllocationOutcome out;
  out.cause = cause;
  record(out);
  notify({SimEvent::Kind::arrival, req.arrival_time, req.id, out});
  return out;
}

void Simulator::process_departure(ConnectionId id) {
  auto it = active_.find(id);
  if (it == active_.end()) throw StateError("departure of unknown connection " + std::to_string(id));
  const double t = it->second.departure_time;
  grid_.release(id);
  active_.erase(it);
  // Drop the queue entry when called directly rather than from the loop.
  if (!departures_.empty() && departures_.top().id == id) departures_.pop();
  else {
    std::vector<Pending> kept;
    while (!departures_.empty()) {
      if (departures_.top().id != id) kept.push_back(departures_.top());
      departures_.pop();
    }
    for (const auto& p : kept) departures_.push(p);
  }
  now_ = std::max(now_, t);
  notify({SimEvent::Kind::departure, t, id, {}});
}

BlockingStats Simulator::run(Policy& policy, std::uint64_t num_requests) {
  set_warmup(stats_.all.offered +
             static_cast<std::uint64_t>(std::floor(cfg_.warmup_fraction * static_cast<double>(num_requests))));
  for (std::uint64_t i = 0; i < num_requests; ++i) {
    const ConnectionRequest req = next_arrival();
    const PolicyChoice choice = policy.decide(*this, req);
    if (choice.decision)
      try_establish(req, *choice.decision);
    else
      record_blocked(req, choice.cause);
  }
  return stats_;
}

void Simulator::clear_network() {
  grid_.clear();
  active_.clear();
  departures_ = {};
  departure_seq_ = 0;
}

void Simulator::reset(std::optional<std::uint64_t> seed) {
  clear_network();
  now_ = 0.0;
  traffic_.reseed(seed.value_or(traffic_.config().seed));
  reset_stats();
}

void Simulator::reset_stats() {
  stats_ = BlockingStats{};
  stats_.window_size = cfg_.window_size;
  warmup_ = 0;
}

} // namespace mcfsim
