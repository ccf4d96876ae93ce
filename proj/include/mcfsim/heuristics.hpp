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
#include "mcfsim/random.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcfsim {

// Restricts a candidate search. Slots are limited to [region_start,
// region_end); region_end < 0 means the full spectrum.
struct SearchScope {
  std::optional<int> route;
  std::optional<int> core;
  int region_start = 0;
  int region_end = -1;
};

// Alternate routing over the candidate routes in rank order; on each route
// cores ascend and the lowest feasible first slot wins. A (core, block) that
// fails the XT threshold is skipped. The result is the lexicographically
// smallest feasible (route, core, start).
PolicyChoice first_fit(const Simulator& sim, const ConnectionRequest& req,
                       const SearchScope& scope = {});

// Every feasible (core, start) on `route`, cores ascending then starts.
std::vector<Decision> feasible_candidates(const Simulator& sim, const ConnectionRequest& req,
                                          int route, const SearchScope& scope = {});

class KspFirstFit final : public Policy {
public:
  PolicyChoice decide(const Simulator& sim, const ConnectionRequest& req) override {
    return first_fit(sim, req);
  }
  std::string_view name() const override { return "ksp-ff-fca"; }
};

// Random core and spectrum choice on the first route with any candidate.
class KspRandomFit final : public Policy {
public:
  explicit KspRandomFit(std::uint64_t seed) : rng_(Rng(seed).split(0x72662d726361ULL)) {}
  PolicyChoice decide(const Simulator& sim, const ConnectionRequest& req) override;
  std::string_view name() const override { return "ksp-rf-rca"; }

private:
  Rng rng_;
};

// Requests with bitrate <= max_bitrate use slots [start, end).
struct ScmaPartition {
  double max_bitrate = 0.0;
  int start = 0;
  int end = 0;
  bool operator==(const ScmaPartition&) const = default;
};

// Two classes splitting [bitrate_min, bitrate_max] at the midpoint and the
// spectrum at slots / 2.
std::vector<ScmaPartition> default_scma_partitions(int slots, double bitrate_min,
                                                   double bitrate_max);
// Throws ValidationError("scma.partitions", ...) unless the regions tile
// [0, slots) in order and bitrate bounds strictly increase.
void validate_scma_partitions(const std::vector<ScmaPartition>& parts, int slots);

// Bitrate-class spectrum partitioning with crosstalk-aware first fit inside
// the class region. No spill-over into other regions.
class KspScma final : public Policy {
public:
  explicit KspScma(std::vector<ScmaPartition> partitions);
  PolicyChoice decide(const Simulator& sim, const ConnectionRequest& req) override;
  std::string_view name() const override { return "ksp-scma"; }

  const ScmaPartition& partition_for(double bitrate_gbps) const;

private:
  std::vector<ScmaPartition> partitions_;
};

inline constexpr std::string_view kPolicyNames[] = {"ksp-ff-fca", "ksp-rf-rca", "ksp-scma", "agent"};

} // namespace mcfsim
