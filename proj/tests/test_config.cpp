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

#include "mcfsim/config.hpp"
#include "mcfsim/error.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <fstream>

using namespace mcfsim;

namespace {

RunConfig with_topology() {
  RunConfig cfg;
  cfg.topology = (testing::data_dir() / "nsfnet.json").string();
  return cfg;
}

bool has_key(const std::vector<Diagnostic>& d, const std::string& key) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.key == key; });
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults are valid and echo the physical constants") {
  const auto cfg = with_topology();
  CHECK(diagnose(cfg).empty());
  const auto text = describe(cfg);
  CHECK(text.find("xt.k = 4e-04\n") != std::string::npos);
  CHECK(text.find("xt.r = 0.05\n") != std::string::npos);
  CHECK(text.find("xt.beta = 4e+06\n") != std::string::npos);
  CHECK(text.find("xt.pitch = 4e-05\n") != std::string::npos);
  CHECK(text.find("modulation.enabled = BPSK,QPSK,8QAM,16QAM\n") != std::string::npos);
  CHECK(text.find("slots = 100\n") != std::string::npos);
  CHECK(text.find("routing.k = 5\n") != std::string::npos);
  CHECK(text.find("env.requests_per_episode = 50\n") != std::string::npos);
  CHECK(text.find("scma.partitions = 62.5:0-50,100:50-100\n") != std::string::npos);
  // Every key appears exactly once.
  const std::string framed = "\n" + text;
  for (const auto& key : config_keys()) {
    const auto first = framed.find("\n" + key + " = ");
    CHECK(first != std::string::npos);
    CHECK(framed.find("\n" + key + " = ", first + 1) == std::string::npos);
  }
}

TEST_CASE("describe output parses back to the same configuration") {
  auto cfg = with_topology();
  apply_setting(cfg, "xt.pitch", "3.5e-5");
  apply_setting(cfg, "run.loads", "500-3000:500");
  apply_setting(cfg, "run.seeds", "1-5");
  apply_setting(cfg, "policy", "ksp-scma");
  apply_setting(cfg, "env.action_mode", "absolute_slot");
  const auto again = parse_config(describe(cfg));
  CHECK(describe(again) == describe(cfg));
  CHECK(again.loads == std::vector<double>{500, 1000, 1500, 2000, 2500, 3000});
  CHECK(again.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
}

TEST_CASE("negative core pitch is a named error") {
  auto cfg = with_topology();
  apply_setting(cfg, "xt.pitch", "-4e-5");
  const auto d = diagnose(cfg);
  REQUIRE(d.size() == 1);
  CHECK(d[0].key == "xt.pitch");
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("xt.pitch"), ValidationError);
}

TEST_CASE("unknown policy lists the allowed set") {
  auto cfg = with_topology();
  apply_setting(cfg, "policy", "best-fit");
  const auto d = diagnose(cfg);
  REQUIRE(d.size() == 1);
  CHECK(d[0].key == "policy");
  for (const char* p : {"ksp-ff-fca", "ksp-rf-rca", "ksp-scma", "agent"})
    CHECK(d[0].message.find(p) != std::string::npos);
}

TEST_CASE("every violation is reported") {
  auto cfg = with_topology();
  cfg.topology = "/nonexistent/topology.json";
  apply_setting(cfg, "xt.k", "0");
  apply_setting(cfg, "traffic.bitrate_min", "300");
  apply_setting(cfg, "run.workers", "0");
  apply_setting(cfg, "env.blocks", "0");
  const auto d = diagnose(cfg);
  CHECK(has_key(d, "xt.k"));
  CHECK(has_key(d, "traffic.bitrate_max"));
  CHECK(has_key(d, "run.workers"));
  CHECK(has_key(d, "env.blocks"));
  CHECK(has_key(d, "topology"));
}

TEST_CASE("bad topology files are reported with the field path") {
  const auto path = std::filesystem::temp_directory_path() / "mcfsim_bad_topology.json";
  {
    std::ofstream out(path);
    out << R"({"nodes": 2, "cores": 3, "core_adjacency": 2,
              "links": [{"a": 0, "b": 1, "length_km": -5}]})";
  }
  auto cfg = with_topology();
  cfg.topology = path.string();
  const auto d = diagnose(cfg);
  REQUIRE(d.size() == 1);
  CHECK(d[0].key == "links[0].length_km");
  std::filesystem::remove(path);
}

TEST_CASE("parsing") {
  const auto cfg = parse_config("# comment\n  slots = 40  # trailing\n\nxt.occupancy_aware = true\n"
                                "modulation.enabled = qpsk, 8-QAM\nscma.partitions = 50:0-10,100:10-40\n"
                                "topology = nets/x.json\n",
                                "/base");
  CHECK(cfg.engine.slots == 40);
  CHECK(cfg.engine.physics.occupancy_aware);
  REQUIRE(cfg.engine.physics.enabled.size() == 2);
  CHECK(cfg.engine.physics.enabled[1].name == "8QAM");
  CHECK(cfg.scma_partitions == std::vector<ScmaPartition>{{50, 0, 10}, {100, 10, 40}});
  CHECK(cfg.topology == "/base/nets/x.json");

  CHECK_THROWS_AS(parse_config("slots 40\n"), ParseError);
  CHECK_THROWS_AS(parse_config("slots = forty\n"), ParseError);
  CHECK_THROWS_AS(parse_config("xt.occupancy_aware = maybe\n"), ParseError);
  CHECK_THROWS_WITH_AS(parse_config("xt.kappa = 1\n"), doctest::Contains("xt.kappa"), ValidationError);
  CHECK_THROWS_AS(parse_config("modulation.enabled = 256QAM\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("run.loads = 3000-500:500\n"), ValidationError);
}

TEST_CASE("policies are constructed by name") {
  auto cfg = with_topology();
  for (const char* p : {"ksp-ff-fca", "ksp-rf-rca", "ksp-scma"}) {
    cfg.policy = p;
    CHECK(make_policy(cfg, 1)->name() == p);
  }
  cfg.policy = "agent";
  CHECK_THROWS_AS(make_policy(cfg, 1), ValidationError);
}

TEST_CASE("runs are reproducible and count steady-state requests") {
  auto cfg = with_topology();
  cfg.engine.slots = 40;
  cfg.requests = 2000;
  Model model(cfg);
  const auto a = run_once(model, 300, 4);
  const auto b = run_once(model, 300, 4);
  CHECK(a.counters.blocked == b.counters.blocked);
  CHECK(a.windows == b.windows);
  CHECK(a.counters.offered == 1800);
  CHECK(a.all.offered == 2000);
  CHECK(a.all.conserved());
  CHECK(a.windows.size() == 2);

  cfg.policy = "agent";
  Model agent(cfg);
  const auto r = run_once(agent, 300, 4);
  CHECK(r.policy == "agent");
  CHECK(r.all.offered == 2000);
  CHECK(r.counters.offered == 1800);
  CHECK(r.all.conserved());
  CHECK(r.all.blocked_total() > 0);
}

}
