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

#include "mcfsim/random.hpp"
#include "mcfsim/spectrum.hpp"
#include "mcfsim/topology.hpp"

#include <cstdint>

namespace mcfsim {

struct ConnectionRequest {
  ConnectionId id = 0;
  NodeId src = 0;
  NodeId dst = 1;
  double bitrate_gbps = 0.0;
  double arrival_time = 0.0;
  double holding_time = 1.0;

  bool operator==(const ConnectionRequest&) const = default;
};

struct TrafficConfig {
  double load_erlang = 250.0;
  double mean_holding = 1.0;
  std::uint64_t seed = 1;
  double bitrate_min = 25.0;
  double bitrate_max = 100.0;
  // 0 draws bitrates continuously; otherwise uniformly from
  // {min, min + step, ...} up to max.
  double discrete_step = 0.0;

  double arrival_rate() const { return load_erlang / mean_holding; }
  void validate() const;
};

// Poisson arrivals, exponential holding times, uniform node pairs and bitrates.
class TrafficGenerator {
public:
  TrafficGenerator(int num_nodes, TrafficConfig cfg);

  ConnectionRequest next();
  // Restart the stream from time 0 and id 0 with a new seed.
  void reseed(std::uint64_t seed);

  const TrafficConfig& config() const { return cfg_; }
  double clock() const { return clock_; }

private:
  int num_nodes_;
  TrafficConfig cfg_;
  Rng rng_;
  double clock_ = 0.0;
  ConnectionId next_id_ = 0;
};

} // namespace mcfsim
