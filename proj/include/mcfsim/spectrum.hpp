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

#include "mcfsim/topology.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mcfsim {

using ConnectionId = std::uint64_t;

// Contiguous run of frequency slots [start, start + size).
struct SlotBlock {
  int start = 0;
  int size = 0;

  int end() const { return start + size; }
  bool operator==(const SlotBlock&) const = default;
};

// Word-packed set of S slot flags.
class SlotMask {
public:
  SlotMask() = default;
  explicit SlotMask(int slots, bool value = false);

  int size() const { return slots_; }
  bool test(int slot) const {
    return (words_[static_cast<std::size_t>(slot) >> 6] >> (slot & 63)) & 1U;
  }
  void set(int slot) { words_[static_cast<std::size_t>(slot) >> 6] |= std::uint64_t{1} << (slot & 63); }
  void reset(int slot) { words_[static_cast<std::size_t>(slot) >> 6] &= ~(std::uint64_t{1} << (slot & 63)); }
  void set_range(int start, int end);
  SlotMask& operator&=(const SlotMask& other);
  SlotMask& operator|=(const SlotMask& other);
  SlotMask operator~() const;
  bool any_in(int start, int end) const;
  bool all_in(int start, int end) const;
  int count() const;
  // First set flag at or after `from`, or size() if none.
  int next_set(int from) const;
  int next_clear(int from) const;

  bool operator==(const SlotMask&) const = default;

private:
  void trim();
  int slots_ = 0;
  std::vector<std::uint64_t> words_;
};

// Occupancy of every (link, core, slot). Each allocation covers one core and
// one block on every link of its route.
class SpectrumGrid {
public:
  struct Allocation {
    std::vector<LinkId> links;
    int core = 0;
    SlotBlock block;
  };

  SpectrumGrid(int num_links, int cores, int slots);

  int num_links() const { return num_links_; }
  int cores() const { return cores_; }
  int slots() const { return slots_; }

  bool is_free(LinkId link, int core, int slot) const { return !occupancy(link, core).test(slot); }
  const SlotMask& occupancy(LinkId link, int core) const;

  // Slots free on `core` of every link in `route`.
  SlotMask route_free(const RoutePath& route, int core) const;
  bool window_free(const RoutePath& route, int core, SlotBlock block) const;

  // Maximal free blocks of size >= need common to all route links, ascending
  // by start; at most max_blocks of them (max_blocks < 0 means no limit).
  std::vector<SlotBlock> find_blocks(const RoutePath& route, int core, int need,
                                     int max_blocks) const;

  // Throws StateError on collision, reused id or out-of-range block.
  void allocate(const RoutePath& route, int core, SlotBlock block, ConnectionId id);
  // Throws StateError if `id` holds no allocation.
  void release(ConnectionId id);
  void clear();

  const std::map<ConnectionId, Allocation>& allocations() const { return allocations_; }
  std::size_t occupied_slots() const { return occupied_; }

  // `0`/`1` string of the occupancy of one (link, core), slot 0 first.
  std::string snapshot(LinkId link, int core) const;
  // One "link core bits" line per (link, core).
  std::string snapshot() const;

  bool operator==(const SpectrumGrid& other) const {
    return num_links_ == other.num_links_ && cores_ == other.cores_ && slots_ == other.slots_ &&
           masks_ == other.masks_;
  }

private:
  SlotMask& occupancy_mut(LinkId link, int core);
  void check_core(int core) const;

  int num_links_;
  int cores_;
  int slots_;
  std::vector<SlotMask> masks_;
  std::map<ConnectionId, Allocation> allocations_;
  std::size_t occupied_ = 0;
};

} // namespace mcfsim
