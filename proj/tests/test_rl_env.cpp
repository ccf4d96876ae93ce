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
#include "mcfsim/heuristics.hpp"
#include "mcfsim/rl_env.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>

using namespace mcfsim;

namespace {

EngineConfig engine(int slots = 16) {
  EngineConfig cfg;
  cfg.slots = slots;
  return cfg;
}

bool bounded(const std::vector<double>& obs) {
  return std::all_of(obs.begin(), obs.end(), [](double x) { return x >= -1.0 && x <= 1.0; });
}

bool same_pair(const ConnectionRequest& r, int a, int b) {
  return (r.src == a && r.dst == b) || (r.src == b && r.dst == a);
}

} // namespace

TEST_SUITE("rl_env") {

TEST_CASE("observation size follows 2N + 2 + KCJF + 4") {
  auto topo = testing::load_data("nsfnet.json");
  for (int j : {1, 3})
    for (int f : {1, 3}) {
      EnvConfig ec;
      ec.blocks_per_core = j;
      ec.features_per_block = f;
      RmscaEnv env(topo, engine(), ec, 1);
      const auto obs = env.reset();
      const std::size_t expected = 2 * 14 + 2 + 5 * 3 * static_cast<std::size_t>(j * f) + 4;
      CHECK(env.observation_size() == expected);
      CHECK(obs.size() == expected);
      CHECK(env.descriptor().action_shape == std::array<int, 3>{5, 3, j});
    }
  EnvConfig abs;
  abs.action_mode = ActionMode::absolute_slot;
  RmscaEnv env(topo, engine(), abs, 1);
  CHECK(env.descriptor().action_shape == std::array<int, 3>{5, 3, 16});
}

TEST_CASE("descriptor JSON") {
  auto topo = testing::load_data("nsfnet.json");
  RmscaEnv env(topo, engine(), EnvConfig{}, 1);
  const auto j = nlohmann::json::parse(env.descriptor().to_json());
  CHECK(j["id"] == "DeepRMSCA-v0");
  CHECK(j["observation_size"] == env.observation_size());
  CHECK(j["action_space"]["shape"] == nlohmann::json::array({5, 3, 1}));
  CHECK(j["reward_range"] == nlohmann::json::array({-1.0, 1.0}));
  CHECK(j["requests_per_episode"] == 50);
  CHECK(j["info_keys"] == nlohmann::json::array({"cause", "route_rank", "core", "block_start", "block_size"}));
}

TEST_CASE("empty network: first block everywhere, previous action unset") {
  auto topo = testing::load_data("nsfnet.json");
  RmscaEnv env(topo, engine(), EnvConfig{}, 4);
  const auto obs = env.reset();
  const auto& req = env.pending();
  CHECK(obs[static_cast<std::size_t>(req.src)] == 1.0);
  CHECK(obs[14 + static_cast<std::size_t>(req.dst)] == 1.0);
  CHECK(std::count(obs.begin(), obs.begin() + 28, 1.0) == 2);
  for (int kc = 0; kc < 15; ++kc) {
    const std::size_t base = 30 + 3 * static_cast<std::size_t>(kc);
    CHECK(obs[base] == 0.0);
    CHECK(obs[base + 1] == 1.0);
    CHECK(obs[base + 2] == 1.0);
  }
  CHECK(obs[75] == -1.0);
  CHECK(obs[76] == -1.0);
  CHECK(obs[77] == -1.0);
  CHECK(obs[78] == 0.0);
}

TEST_CASE("reset with the same seed is deterministic") {
  auto topo = testing::load_data("nsfnet.json");
  RmscaEnv a(topo, engine(), EnvConfig{}, 3), b(topo, engine(), EnvConfig{}, 3);
  CHECK(a.reset(77) == b.reset(77));
  for (int i = 0; i < 20; ++i) {
    const RmscaAction act{i % 5, i % 3, 0};
    const auto ra = a.step(act);
    const auto rb = b.step(act);
    REQUIRE(ra.observation == rb.observation);
    REQUIRE(ra.reward == rb.reward);
  }
  CHECK(a.reset(77) == b.reset(77));
}

TEST_CASE("step before reset or after done is a state error") {
  auto topo = testing::load_data("nsfnet.json");
  EnvConfig ec;
  ec.requests_per_episode = 3;
  RmscaEnv env(topo, engine(), ec, 1);
  CHECK_THROWS_AS(env.step({0, 0, 0}), StateError);
  env.reset();
  env.step({0, 0, 0});
  env.step({0, 0, 0});
  CHECK(env.step({0, 0, 0}).done);
  CHECK_THROWS_AS(env.step({0, 0, 0}), StateError);
}

TEST_CASE("episodes end after 50 requests with rewards of plus or minus one") {
  auto topo = testing::load_data("nsfnet.json");
  RmscaEnv env(topo, engine(8), EnvConfig{}, 2);
  Rng rng(1);
  for (int ep = 0; ep < 5; ++ep) {
    env.reset();
    int steps = 0;
    bool done = false;
    while (!done) {
      const RmscaAction a{static_cast<int>(rng.below(5)), static_cast<int>(rng.below(3)), 0};
      const auto r = env.step(a);
      ++steps;
      CHECK((r.reward == 1.0 || r.reward == -1.0));
      CHECK(r.observation.size() == env.observation_size());
      CHECK(bounded(r.observation));
      CHECK((r.info.cause == BlockCause::none) == (r.reward > 0));
      done = r.done;
      CHECK(done == (steps == 50));
    }
    CHECK(std::abs(env.episode_return()) <= 50.0);
  }
}

TEST_CASE("out-of-range action components are rejected as spectrum") {
  auto topo = testing::load_data("nsfnet.json");
  RmscaEnv env(topo, engine(), EnvConfig{}, 2);
  env.reset();
  CHECK(env.step({9, 0, 0}).info.cause == BlockCause::spectrum);
  CHECK(env.step({0, 7, 0}).info.cause == BlockCause::spectrum);
  CHECK(env.step({0, 0, 5}).info.cause == BlockCause::spectrum);
  const auto r = env.step({-1, 0, 0});
  CHECK(r.reward == -1.0);
  CHECK(r.info.cause == BlockCause::spectrum);
}

TEST_CASE("persistent mode keeps the grid across episodes") {
  auto topo = testing::load_data("nsfnet.json");
  auto cfg = engine();
  cfg.traffic.load_erlang = 1e5; // no departures within an episode
  EnvConfig ec;
  ec.reset_state_on_episode = false;
  ec.requests_per_episode = 5;
  RmscaEnv env(topo, cfg, ec, 6);
  env.reset();
  for (int i = 0; i < 5; ++i) env.step({0, 0, 0});
  const auto occupied = env.simulator().grid().occupied_slots();
  REQUIRE(occupied > 0);
  env.reset();
  CHECK(env.simulator().grid().occupied_slots() == occupied);
  CHECK(env.episode_step() == 0);
  CHECK(env.episode_return() == 0.0);

  EnvConfig fresh = ec;
  fresh.reset_state_on_episode = true;
  RmscaEnv env2(topo, cfg, fresh, 6);
  env2.reset();
  for (int i = 0; i < 5; ++i) env2.step({0, 0, 0});
  env2.reset();
  CHECK(env2.simulator().grid().occupied_slots() == 0);
}

TEST_CASE("cumulative reward field") {
  auto topo = testing::load_data("nsfnet.json");
  EnvConfig ec;
  ec.reward_field = RewardField::cumulative;
  RmscaEnv env(topo, engine(), ec, 2);
  env.reset();
  env.step({0, 0, 0});
  const auto r = env.step({0, 9, 0});
  CHECK(r.observation.back() == doctest::Approx(env.episode_return() / 50.0));
  CHECK(env.episode_return() == 0.0);
}

TEST_CASE("crosstalk-infeasible and feasible alternatives for the same request") {
  // Direct link 0-2 (600 km) is route 0; 0-1-2 (800 km) is route 1.
  auto topo = testing::graph(3, {{0, 2, 600}, {0, 1, 400}, {1, 2, 400}}, 3, 2, 2);
  auto cfg = engine(20);
  cfg.physics.occupancy_aware = true;
  cfg.physics.xt.coupling = 4e-3; // h = 1e-8 per metre
  cfg.traffic.load_erlang = 1e6;
  EnvConfig ec;
  ec.action_mode = ActionMode::absolute_slot;
  bool exercised = false;
  for (std::uint64_t seed = 1; seed < 300 && !exercised; ++seed) {
    RmscaEnv env(topo, cfg, ec, seed);
    env.reset();
    if (!same_pair(env.pending(), 0, 2)) continue;
    REQUIRE(env.step({0, 0, 10}).reward == 1.0);
    if (!same_pair(env.pending(), 0, 2)) continue;
    exercised = true;

    RmscaEnv first = env;
    const auto r1 = first.step({0, 1, 10});
    CHECK(r1.reward == -1.0);
    CHECK(r1.info.cause == BlockCause::crosstalk);

    RmscaEnv second = env;
    const auto r2 = second.step({1, 1, 10});
    CHECK(r2.reward == 1.0);
    CHECK(r2.info.route_rank == 2);
    CHECK(r2.info.core == 1);
    CHECK(r2.info.block_start == 10);
  }
  CHECK(exercised);
}

TEST_CASE("block-index action with J = 1 matches first fit restricted to (k, c)") {
  auto topo = testing::graph(5, {{0, 1, 300}, {1, 2, 400}, {2, 3, 200}, {3, 4, 900}, {0, 4, 1200},
                                 {1, 3, 700}},
                             2, 1, 3);
  auto cfg = engine(10);
  cfg.traffic.load_erlang = 1e5;
  EnvConfig ec;
  ec.reset_state_on_episode = false;
  ec.requests_per_episode = 1000;
  RmscaEnv env(topo, cfg, ec, 12);
  env.reset();
  Rng rng(4);
  int compared = 0, agreed = 0, established = 0;
  for (int i = 0; i < 120; ++i) {
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < 2; ++c) {
        RmscaEnv probe = env;
        const bool ok = probe.step({k, c, 0}).reward > 0;
        SearchScope scope;
        scope.route = k;
        scope.core = c;
        const bool ff = first_fit(env.simulator(), env.pending(), scope).decision.has_value();
        ++compared;
        agreed += ok == ff;
        established += ok;
      }
    env.step({static_cast<int>(rng.below(3)), static_cast<int>(rng.below(2)), 0});
  }
  CHECK(agreed == compared);
  CHECK(established > 0);
  CHECK(established < compared);
}

TEST_CASE("routes state matches an independent block scan") {
  auto topo = testing::load_data("nsfnet.json", 3);
  auto cfg = engine(24);
  cfg.traffic.load_erlang = 1e5;
  EnvConfig ec;
  ec.blocks_per_core = 3;
  ec.reset_state_on_episode = false;
  ec.requests_per_episode = 10000;
  RmscaEnv env(topo, cfg, ec, 8);
  env.reset();
  Rng rng(2);
  for (int round = 0; round < 60; ++round) {
    for (int i = 0; i < 4; ++i)
      env.step({static_cast<int>(rng.below(3)), static_cast<int>(rng.below(3)), static_cast<int>(rng.below(3))});
    const auto obs = env.build_observation();
    const auto& req = env.pending();
    const auto& routes = topo->routes(req.src, req.dst);
    const auto* f0 = oracle::best_format(routes.front().length_km);
    const double requested = f0 ? oracle::slots_needed(req.bitrate_gbps, f0->bits, 1) / 24.0 : 0.0;
    REQUIRE(obs[29] == doctest::Approx(requested));
    std::size_t pos = 30;
    for (int k = 0; k < 3; ++k) {
      const auto* f = oracle::best_format(routes[static_cast<std::size_t>(k)].length_km);
      for (int c = 0; c < 3; ++c) {
        std::vector<std::pair<int, int>> blocks;
        if (f) {
          std::vector<std::string> occ;
          for (LinkId l : routes[static_cast<std::size_t>(k)].links)
            occ.push_back(env.simulator().grid().snapshot(l, c));
          blocks = oracle::free_blocks(occ, oracle::slots_needed(req.bitrate_gbps, f->bits, 1));
        }
        for (std::size_t j = 0; j < 3; ++j, pos += 3) {
          if (j < blocks.size()) {
            REQUIRE(obs[pos] == doctest::Approx(blocks[j].first / 24.0));
            REQUIRE(obs[pos + 1] == doctest::Approx(blocks[j].second / 24.0));
            REQUIRE(obs[pos + 2] == 1.0);
          } else {
            REQUIRE(obs[pos] == -1.0);
            REQUIRE(obs[pos + 1] == -1.0);
            REQUIRE(obs[pos + 2] == 0.0);
          }
        }
      }
    }
    REQUIRE(pos + 4 == obs.size());
    CHECK(bounded(obs));
  }
}

TEST_CASE("fully occupied network advertises no blocks") {
  auto topo = testing::chain({100}, 1, 0, 1);
  auto cfg = engine(4);
  cfg.traffic.load_erlang = 1e6;
  cfg.physics.guard_slots = 0;
  cfg.traffic.bitrate_min = 25;
  cfg.traffic.bitrate_max = 50;
  EnvConfig ec;
  ec.action_mode = ActionMode::absolute_slot;
  RmscaEnv env(topo, cfg, ec, 1);
  env.reset();
  for (int s = 0; s < 4; ++s) REQUIRE(env.step({0, 0, s}).reward == 1.0);
  const auto obs = env.build_observation();
  // 2N + 2 = 6; then one (k, c) with J = 1.
  CHECK(obs[6] == -1.0);
  CHECK(obs[7] == -1.0);
  CHECK(obs[8] == 0.0);
}

TEST_CASE("random-action driver keeps the counters conserved") {
  auto topo = testing::load_data("nsfnet.json");
  RmscaEnv env(topo, engine(), EnvConfig{}, 5);
  Rng rng(5);
  std::uint64_t steps = 0;
  for (int ep = 0; ep < 200; ++ep) {
    env.reset();
    while (!env.done()) {
      env.step({static_cast<int>(rng.below(5)), static_cast<int>(rng.below(3)), 0});
      ++steps;
    }
    const auto& s = env.simulator().stats().all;
    REQUIRE(s.conserved());
    REQUIRE(s.offered == 50);
  }
  CHECK(steps == 10000);
}

TEST_CASE("configuration errors name the key") {
  auto topo = testing::load_data("nsfnet.json");
  EnvConfig ec;
  ec.requests_per_episode = 0;
  CHECK_THROWS_WITH_AS(RmscaEnv(topo, engine(), ec, 1), doctest::Contains("env.requests_per_episode"),
                       ValidationError);
  ec = EnvConfig{};
  ec.features_per_block = 2;
  CHECK_THROWS_WITH_AS(RmscaEnv(topo, engine(), ec, 1), doctest::Contains("env.features"), ValidationError);
}

}
