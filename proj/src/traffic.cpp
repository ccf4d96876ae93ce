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

#include "mcfsim/traffic.hpp"

#include "mcfsim/error.hpp"

#include <cmath>

namespace mcfsim {

namespace {
constexpr std::uint64_t kTrafficStream = 0x7472616666696321ULL;
}

void TrafficConfig::validate() const {
  if (!(load_erlang > 0.0) || !std::isfinite(load_erlang))
    throw ValidationError("traffic.load_erlang", "must be > 0");
  if (!(mean_holding > 0.0) || !std::isfinite(mean_holding))
    throw ValidationError("traffic.mean_holding", "must be > 0");
  if (!(bitrate_min > 0.0)) throw ValidationError("traffic.bitrate_min", "must be > 0");
  if (!(bitrate_max >= bitrate_min))
    throw ValidationError("traffic.bitrate_max", "must be >= traffic.bitrate_min");
  if (!(discrete_step >= 0.0)) throw ValidationError("traffic.discrete_step", "must be >= 0");
}

TrafficGenerator::TrafficGenerator(int num_nodes, TrafficConfig cfg)
    : num_nodes_(num_nodes), cfg_(cfg), rng_(Rng(cfg.seed).split(kTrafficStream)) {
  if (num_nodes_ < 2) throw ValidationError("nodes", "traffic needs at least 2 nodes");
  cfg_.validate();
}

void TrafficGenerator::reseed(std::uint64_t seed) {
  cfg_.seed = seed;
  rng_ = Rng(seed).split(kTrafficStream);
  clock_ = 0.0;
  next_id_ = 0;
}

ConnectionRequest TrafficGenerator::next() {
  ConnectionRequest r;
  r.id = next_id_++;
  clock_ += rng_.exponential(cfg_.arrival_rate());
  r.arrival_time = clock_;
  r.holding_time = rng_.exponential(1.0 / cfg_.mean_holding);

  // Uniform over ordered pairs with src != dst.
  const auto n = static_cast<std::uint64_t>(num_nodes_);
  r.src = static_cast<NodeId>(rng_.below(n));
  const auto offset = static_cast<NodeId>(rng_.below(n - 1));
  r.dst = offset >= r.src ? offset + 1 : offset;

  if (cfg_.discrete_step > 0.0) {
    const auto steps = static_cast<std::uint64_t>(
        std::floor((cfg_.bitrate_max - cfg_.bitrate_min) / cfg_.discrete_step + 1e-9));
    r.bitrate_gbps = cfg_.bitrate_min + cfg_.discrete_step * static_cast<double>(rng_.below(steps + 1));
  } else {
    r.bitrate_gbps = rng_.uniform(cfg_.bitrate_min, cfg_.bitrate_max);
  }
  return r;
}

} // namespace mcfsim
