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

#include "mcfsim/heuristics.hpp"

#include "mcfsim/error.hpp"

#include <algorithm>

namespace mcfsim {

namespace {

// Tracks the furthest pipeline stage any candidate reached, so a rejection
// reports the same cause the engine would.
struct CauseTracker {
  bool any_route = false;
  bool any_reach = false;
  bool any_window = false;

  BlockCause cause() const {
    if (!any_route) return BlockCause::no_route;
    if (!any_reach) return BlockCause::reach;
    if (any_window) return BlockCause::crosstalk;
    return BlockCause::spectrum;
  }
};

struct RouteRange {
  int first;
  int last; // exclusive
};

RouteRange route_range(const SearchScope& scope, int available) {
  if (scope.route) {
    const int r = *scope.route;
    if (r < 0 || r >= available) return {0, 0};
    return {r, r + 1};
  }
  return {0, available};
}

// Visits feasible windows of one (route, core) in ascending start order.
// `visit` returns true to stop.
template <typename Visit>
void scan_core(const Simulator& sim, const RoutePath& route, int core, int need,
               const ModulationFormat& m, const SearchScope& scope, CauseTracker& tracker,
               Visit&& visit) {
  const int slots = sim.grid().slots();
  const int lo = std::clamp(scope.region_start, 0, slots);
  const int hi = scope.region_end < 0 ? slots : std::clamp(scope.region_end, lo, slots);
  const SlotMask free = sim.grid().route_free(route, core);
  std::optional<bool> fixed_xt;
  for (int p = free.next_set(lo); p < hi; p = free.next_set(free.next_clear(p))) {
    const int e = std::min(free.next_clear(p), hi);
    for (int s = p; s + need <= e; ++s) {
      tracker.any_window = true;
      const SlotBlock block{s, need};
      bool ok;
      if (sim.crosstalk_slot_independent()) {
        if (!fixed_xt) fixed_xt = sim.crosstalk_ok(route, core, block, m);
        ok = *fixed_xt;
        if (!ok) return;
      } else {
        ok = sim.crosstalk_ok(route, core, block, m);
      }
      if (ok && visit(s)) return;
    }
  }
}

} // namespace

PolicyChoice first_fit(const Simulator& sim, const ConnectionRequest& req, const SearchScope& scope) {
  const auto& routes = sim.routes_for(req);
  CauseTracker tracker;
  const RouteRange rr = route_range(scope, static_cast<int>(routes.size()));
  for (int r = rr.first; r < rr.last; ++r) {
    tracker.any_route = true;
    const RoutePath& route = routes[static_cast<std::size_t>(r)];
    const auto m = sim.modulation_for(route);
    if (!m) continue;
    tracker.any_reach = true;
    const int need = sim.demand_for(req, *m).total();
    for (int c = 0; c < sim.grid().cores(); ++c) {
      if (scope.core && *scope.core != c) continue;
      std::optional<int> hit;
      scan_core(sim, route, c, need, *m, scope, tracker, [&](int s) {
        hit = s;
        return true;
      });
      if (hit) return {Decision{r, c, *hit}, BlockCause::none};
    }
  }
  return {std::nullopt, tracker.cause()};
}

namespace {

std::vector<Decision> candidates_on(const Simulator& sim, const ConnectionRequest& req, int r,
                                    const SearchScope& scope, CauseTracker& tracker) {
  std::vector<Decision> out;
  const auto& routes = sim.routes_for(req);
  if (r < 0 || r >= static_cast<int>(routes.size())) return out;
  tracker.any_route = true;
  const RoutePath& route = routes[static_cast<std::size_t>(r)];
  const auto m = sim.modulation_for(route);
  if (!m) return out;
  tracker.any_reach = true;
  const int need = sim.demand_for(req, *m).total();
  for (int c = 0; c < sim.grid().cores(); ++c) {
    if (scope.core && *scope.core != c) continue;
    scan_core(sim, route, c, need, *m, scope, tracker, [&](int s) {
      out.push_back({r, c, s});
      return false;
    });
  }
  return out;
}

} // namespace

std::vector<Decision> feasible_candidates(const Simulator& sim, const ConnectionRequest& req,
                                          int route, const SearchScope& scope) {
  CauseTracker tracker;
  return candidates_on(sim, req, route, scope, tracker);
}

PolicyChoice KspRandomFit::decide(const Simulator& sim, const ConnectionRequest& req) {
  CauseTracker tracker;
  const int n = static_cast<int>(sim.routes_for(req).size());
  for (int r = 0; r < n; ++r) {
    auto cands = candidates_on(sim, req, r, {}, tracker);
    if (!cands.empty()) return {cands[static_cast<std::size_t>(rng_.below(cands.size()))], BlockCause::none};
  }
  return {std::nullopt, tracker.cause()};
}

std::vector<ScmaPartition> default_scma_partitions(int slots, double bitrate_min, double bitrate_max) {
  const int half = slots / 2;
  return {{0.5 * (bitrate_min + bitrate_max), 0, half}, {bitrate_max, half, slots}};
}

void validate_scma_partitions(const std::vector<ScmaPartition>& parts, int slots) {
  if (parts.empty()) throw ValidationError("scma.partitions", "at least one partition required");
  int expected = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    const std::string where = "partition " + std::to_string(i);
    if (p.start != expected)
      throw ValidationError("scma.partitions", where + " must start at slot " + std::to_string(expected));
    if (p.end <= p.start) throw ValidationError("scma.partitions", where + " is empty");
    if (i > 0 && !(p.max_bitrate > parts[i - 1].max_bitrate))
      throw ValidationError("scma.partitions", where + " bitrate bound must increase");
    expected = p.end;
  }
  if (expected != slots)
    throw ValidationError("scma.partitions", "regions must cover [0, " + std::to_string(slots) + ")");
}

KspScma::KspScma(std::vector<ScmaPartition> partitions) : partitions_(std::move(partitions)) {
  if (partitions_.empty()) throw ValidationError("scma.partitions", "at least one partition required");
}

const ScmaPartition& KspScma::partition_for(double bitrate_gbps) const {
  for (const auto& p : partitions_)
    if (bitrate_gbps <= p.max_bitrate) return p;
  return partitions_.back();
}

PolicyChoice KspScma::decide(const Simulator& sim, const ConnectionRequest& req) {
  const ScmaPartition& p = partition_for(req.bitrate_gbps);
  SearchScope scope;
  scope.region_start = p.start;
  scope.region_end = p.end;
  return first_fit(sim, req, scope);
}

} // namespace mcfsim
