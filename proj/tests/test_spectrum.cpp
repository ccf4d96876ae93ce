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

#include "doctest.h"

#include "mcfsim/error.hpp"
#include "mcfsim/spectrum.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include <random>

using namespace mcfsim;

namespace {

RoutePath route_of(const Topology& t, NodeId s, NodeId d) { return t.routes(s, d).front(); }

} // namespace

TEST_SUITE("spectrum") {

TEST_CASE("empty grid: one block spanning every slot") {
  const auto t = testing::chain({100, 200});
  SpectrumGrid g(2, 3, 100);
  const auto blocks = g.find_blocks(route_of(*t, 0, 2), 0, 3, 1);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0] == SlotBlock{0, 100});
}

TEST_CASE("slots 0-9 used on one link: first block starts at 10") {
  const auto t = testing::chain({100, 200});
  SpectrumGrid g(2, 3, 100);
  RoutePath one_link = route_of(*t, 1, 2);
  g.allocate(one_link, 0, {0, 10}, 7);
  const auto blocks = g.find_blocks(route_of(*t, 0, 2), 0, 3, 1);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].start == 10);
  CHECK(blocks[0].size == 90);
  // Other cores unaffected.
  CHECK(g.find_blocks(route_of(*t, 0, 2), 1, 3, 1).front().start == 0);
}

TEST_CASE("fully occupied core yields no blocks") {
  const auto t = testing::chain({100});
  SpectrumGrid g(1, 3, 100);
  g.allocate(route_of(*t, 0, 1), 2, {0, 100}, 1);
  CHECK(g.find_blocks(route_of(*t, 0, 1), 2, 1, -1).empty());
}

TEST_CASE("zero-slot grid has no blocks") {
  const auto t = testing::chain({100});
  SpectrumGrid g(1, 1, 0);
  CHECK(g.find_blocks(route_of(*t, 0, 1), 0, 1, -1).empty());
}

TEST_CASE("allocate then release restores the grid") {
  const auto t = testing::chain({100, 200, 300});
  SpectrumGrid g(3, 3, 100);
  const SpectrumGrid before = g;
  const RoutePath r = route_of(*t, 0, 3);
  g.allocate(r, 1, {20, 5}, 42);
  CHECK(g.occupied_slots() == 15);
  CHECK_FALSE(g == before);
  g.release(42);
  CHECK(g == before);
  CHECK(g.occupied_slots() == 0);
}

TEST_CASE("disjoint allocations commute") {
  const auto t = testing::chain({100, 200});
  const RoutePath r = route_of(*t, 0, 2);
  SpectrumGrid a(2, 3, 100), b(2, 3, 100);
  a.allocate(r, 0, {0, 4}, 1);
  a.allocate(r, 0, {10, 4}, 2);
  b.allocate(r, 0, {10, 4}, 2);
  b.allocate(r, 0, {0, 4}, 1);
  CHECK(a == b);
}

TEST_CASE("collision, unknown id and double release are errors") {
  const auto t = testing::chain({100, 200});
  const RoutePath r = route_of(*t, 0, 2);
  SpectrumGrid g(2, 3, 100);
  g.allocate(r, 0, {5, 5}, 1);
  CHECK_THROWS_AS(g.allocate(route_of(*t, 1, 2), 0, {9, 2}, 2), StateError);
  CHECK_THROWS_AS(g.allocate(r, 1, {0, 2}, 1), StateError); // id reuse
  CHECK_THROWS_AS(g.allocate(r, 0, {99, 2}, 3), StateError);
  CHECK_THROWS_AS(g.release(99), StateError);
  g.release(1);
  CHECK_THROWS_AS(g.release(1), StateError);
}

TEST_CASE("release drops utilization by hops x block size") {
  const auto t = testing::chain({100, 200, 300});
  SpectrumGrid g(3, 3, 100);
  g.allocate(route_of(*t, 0, 3), 0, {0, 4}, 1);
  g.allocate(route_of(*t, 1, 2), 0, {50, 7}, 2);
  const auto before = g.occupied_slots();
  g.release(1);
  CHECK(before - g.occupied_slots() == 3 * 4);
}

TEST_CASE("snapshot strings") {
  const auto t = testing::chain({100});
  SpectrumGrid g(1, 2, 8);
  g.allocate(route_of(*t, 0, 1), 1, {2, 3}, 1);
  CHECK(g.snapshot(0, 0) == "00000000");
  CHECK(g.snapshot(0, 1) == "00111000");
  CHECK(g.snapshot() == "0 0 00000000\n0 1 00111000\n");
}

TEST_CASE("property: find_blocks equals a character scan; bookkeeping conserved") {
  const auto t = testing::chain({100, 100, 100, 100});
  std::mt19937 gen(7);
  for (int slots : {1, 13, 64, 65, 100, 130}) {
    SpectrumGrid g(4, 2, slots);
    ConnectionId next = 0;
    std::vector<ConnectionId> live;
    for (int op = 0; op < 400; ++op) {
      const NodeId s = std::uniform_int_distribution<int>(0, 3)(gen);
      const NodeId d = std::uniform_int_distribution<int>(s + 1, 4)(gen);
      const RoutePath r = route_of(*t, s, d);
      const int core = std::uniform_int_distribution<int>(0, 1)(gen);
      if (!live.empty() && std::bernoulli_distribution(0.4)(gen)) {
        const auto idx = std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(gen);
        g.release(live[idx]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(idx));
      } else {
        const int need = std::uniform_int_distribution<int>(1, std::max(1, slots / 4))(gen);
        const auto blocks = g.find_blocks(r, core, need, -1);
        std::vector<std::string> occ;
        for (LinkId l : r.links) occ.push_back(g.snapshot(l, core));
        const auto expected = oracle::free_blocks(occ, need);
        REQUIRE(blocks.size() == expected.size());
        for (std::size_t i = 0; i < blocks.size(); ++i) {
          CHECK(blocks[i].start == expected[i].first);
          CHECK(blocks[i].size == expected[i].second);
        }
        if (!blocks.empty()) {
          const auto& b = blocks[std::uniform_int_distribution<std::size_t>(0, blocks.size() - 1)(gen)];
          g.allocate(r, core, {b.start, need}, next);
          live.push_back(next++);
        }
      }
      std::size_t expected_occupied = 0;
      for (const auto& [id, a] : g.allocations()) expected_occupied += a.links.size() * static_cast<std::size_t>(a.block.size);
      REQUIRE(g.occupied_slots() == expected_occupied);
      int counted = 0;
      for (LinkId l = 0; l < 4; ++l)
        for (int c = 0; c < 2; ++c) counted += g.occupancy(l, c).count();
      REQUIRE(static_cast<std::size_t>(counted) == expected_occupied);
    }
  }
}

TEST_CASE("SlotMask word boundaries") {
  SlotMask m(130);
  m.set(63);
  m.set(64);
  m.set(129);
  CHECK(m.next_set(0) == 63);
  CHECK(m.next_set(65) == 129);
  CHECK(m.next_clear(63) == 65);
  CHECK((~m).count() == 127);
  CHECK(m.any_in(60, 64));
  CHECK_FALSE(m.any_in(65, 129));
  CHECK(SlotMask(130, true).all_in(0, 130));
}

}
