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

#include "mcfsim/config.hpp"

#include "mcfsim/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mcfsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ParseError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

long long to_int(std::string_view key, std::string_view v) {
  v = trim(v);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ParseError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ParseError(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError(std::string(key) + ": expected true/false, got '" + std::string(v) + "'");
}

std::string fmt(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += f(xs[i]);
  }
  return out;
}

// "lo-hi" with optional ":step" expands to an inclusive grid, e.g. 500-3000:500.
std::vector<double> parse_loads(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split(v, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    if (dash == std::string_view::npos) {
      out.push_back(to_double(key, item));
      continue;
    }
    const auto colon = item.find(':');
    const double lo = to_double(key, item.substr(0, dash));
    const double hi = to_double(key, item.substr(dash + 1, colon == std::string_view::npos ? std::string_view::npos : colon - dash - 1));
    const double step = colon == std::string_view::npos ? 1.0 : to_double(key, item.substr(colon + 1));
    if (!(step > 0.0) || hi < lo) throw ValidationError(std::string(key), "bad range '" + std::string(item) + "'");
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i) out.push_back(lo + i * step);
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(std::string_view key, std::string_view v) {
  std::vector<std::uint64_t> out;
  for (auto item : split(v, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(to_u64(key, item));
      continue;
    }
    const auto lo = to_u64(key, item.substr(0, dash));
    const auto hi = to_u64(key, item.substr(dash + 1));
    if (hi < lo) throw ValidationError(std::string(key), "bad range '" + std::string(item) + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

std::vector<ScmaPartition> parse_partitions(std::string_view key, std::string_view v) {
  std::vector<ScmaPartition> out;
  for (auto item : split(v, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    const auto dash = item.find('-', colon == std::string_view::npos ? 0 : colon);
    if (colon == std::string_view::npos || dash == std::string_view::npos)
      throw ParseError(std::string(key) + ": expected 'max_bitrate:start-end', got '" + std::string(item) + "'");
    ScmaPartition p;
    p.max_bitrate = to_double(key, item.substr(0, colon));
    p.start = static_cast<int>(to_int(key, item.substr(colon + 1, dash - colon - 1)));
    p.end = static_cast<int>(to_int(key, item.substr(dash + 1)));
    out.push_back(p);
  }
  return out;
}

struct KeyHandler {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::map<std::string, KeyHandler, std::less<>>& handlers() {
  static const std::map<std::string, KeyHandler, std::less<>> table = [] {
    std::map<std::string, KeyHandler, std::less<>> t;
    auto num = [&t](const char* key, auto member) {
      t[key] = {[key, member](RunConfig& c, std::string_view v) { member(c) = to_double(key, v); },
                [member](const RunConfig& c) { return fmt(member(const_cast<RunConfig&>(c))); }};
    };
    auto integer = [&t](const char* key, auto member) {
      t[key] = {[key, member](RunConfig& c, std::string_view v) {
                  const long long x = to_int(key, v);
                  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                    throw ValidationError(key, "out of range");
                  member(c) = static_cast<int>(x);
                },
                [member](const RunConfig& c) { return std::to_string(member(const_cast<RunConfig&>(c))); }};
    };
    auto boolean = [&t](const char* key, auto member) {
      t[key] = {[key, member](RunConfig& c, std::string_view v) { member(c) = to_bool(key, v); },
                [member](const RunConfig& c) {
                  return std::string(member(const_cast<RunConfig&>(c)) ? "true" : "false");
                }};
    };

    t["topology"] = {[](RunConfig& c, std::string_view v) { c.topology = std::string(trim(v)); },
                     [](const RunConfig& c) { return c.topology; }};
    integer("routing.k", [](RunConfig& c) -> int& { return c.k_paths; });
    integer("slots", [](RunConfig& c) -> int& { return c.engine.slots; });
    num("slot_ghz", [](RunConfig& c) -> double& { return c.engine.physics.slot_ghz; });
    integer("guard_slots", [](RunConfig& c) -> int& { return c.engine.physics.guard_slots; });
    num("xt.k", [](RunConfig& c) -> double& { return c.engine.physics.xt.coupling; });
    num("xt.r", [](RunConfig& c) -> double& { return c.engine.physics.xt.bend_radius; });
    num("xt.beta", [](RunConfig& c) -> double& { return c.engine.physics.xt.propagation; });
    num("xt.pitch", [](RunConfig& c) -> double& { return c.engine.physics.xt.core_pitch; });
    boolean("xt.occupancy_aware", [](RunConfig& c) -> bool& { return c.engine.physics.occupancy_aware; });
    t["modulation.enabled"] = {
        [](RunConfig& c, std::string_view v) {
          std::vector<ModulationFormat> formats;
          for (auto name : split(v, ','))
            if (!name.empty()) formats.push_back(modulation_by_name(name));
          std::sort(formats.begin(), formats.end(),
                    [](const auto& a, const auto& b) { return a.bits_per_symbol < b.bits_per_symbol; });
          formats.erase(std::unique(formats.begin(), formats.end()), formats.end());
          c.engine.physics.enabled = std::move(formats);
        },
        [](const RunConfig& c) {
          return join(c.engine.physics.enabled, [](const ModulationFormat& m) { return std::string(m.name); });
        }};
    num("traffic.load_erlang", [](RunConfig& c) -> double& { return c.engine.traffic.load_erlang; });
    num("traffic.mean_holding", [](RunConfig& c) -> double& { return c.engine.traffic.mean_holding; });
    t["traffic.seed"] = {[](RunConfig& c, std::string_view v) { c.engine.traffic.seed = to_u64("traffic.seed", v); },
                         [](const RunConfig& c) { return std::to_string(c.engine.traffic.seed); }};
    num("traffic.bitrate_min", [](RunConfig& c) -> double& { return c.engine.traffic.bitrate_min; });
    num("traffic.bitrate_max", [](RunConfig& c) -> double& { return c.engine.traffic.bitrate_max; });
    num("traffic.discrete_step", [](RunConfig& c) -> double& { return c.engine.traffic.discrete_step; });
    t["policy"] = {[](RunConfig& c, std::string_view v) { c.policy = std::string(trim(v)); },
                   [](const RunConfig& c) { return c.policy; }};
    t["scma.partitions"] = {
        [](RunConfig& c, std::string_view v) { c.scma_partitions = parse_partitions("scma.partitions", v); },
        [](const RunConfig& c) {
          return join(c.resolved_scma(), [](const ScmaPartition& p) {
            return fmt(p.max_bitrate) + ":" + std::to_string(p.start) + "-" + std::to_string(p.end);
          });
        }};
    integer("stats.window", [](RunConfig& c) -> int& { return c.engine.window_size; });
    num("stats.warmup_fraction", [](RunConfig& c) -> double& { return c.engine.warmup_fraction; });
    integer("env.requests_per_episode", [](RunConfig& c) -> int& { return c.env.requests_per_episode; });
    boolean("env.reset_state", [](RunConfig& c) -> bool& { return c.env.reset_state_on_episode; });
    t["env.action_mode"] = {
        [](RunConfig& c, std::string_view v) {
          v = trim(v);
          if (v == "block_index") c.env.action_mode = ActionMode::block_index;
          else if (v == "absolute_slot") c.env.action_mode = ActionMode::absolute_slot;
          else throw ValidationError("env.action_mode", "expected block_index or absolute_slot");
        },
        [](const RunConfig& c) {
          return std::string(c.env.action_mode == ActionMode::block_index ? "block_index" : "absolute_slot");
        }};
    integer("env.blocks", [](RunConfig& c) -> int& { return c.env.blocks_per_core; });
    integer("env.features", [](RunConfig& c) -> int& { return c.env.features_per_block; });
    t["env.reward_field"] = {
        [](RunConfig& c, std::string_view v) {
          v = trim(v);
          if (v == "previous") c.env.reward_field = RewardField::previous;
          else if (v == "cumulative") c.env.reward_field = RewardField::cumulative;
          else throw ValidationError("env.reward_field", "expected previous or cumulative");
        },
        [](const RunConfig& c) {
          return std::string(c.env.reward_field == RewardField::previous ? "previous" : "cumulative");
        }};
    t["run.loads"] = {[](RunConfig& c, std::string_view v) { c.loads = parse_loads("run.loads", v); },
                      [](const RunConfig& c) { return join(c.loads, [](double x) { return fmt(x); }); }};
    t["run.seeds"] = {[](RunConfig& c, std::string_view v) { c.seeds = parse_seeds("run.seeds", v); },
                      [](const RunConfig& c) {
                        return join(c.seeds, [](std::uint64_t s) { return std::to_string(s); });
                      }};
    t["run.requests"] = {[](RunConfig& c, std::string_view v) { c.requests = to_u64("run.requests", v); },
                         [](const RunConfig& c) { return std::to_string(c.requests); }};
    integer("run.workers", [](RunConfig& c) -> int& { return c.workers; });
    return t;
  }();
  return table;
}

} // namespace

std::vector<ScmaPartition> RunConfig::resolved_scma() const {
  if (!scma_partitions.empty()) return scma_partitions;
  return default_scma_partitions(engine.slots, engine.traffic.bitrate_min, engine.traffic.bitrate_max);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "topology", "routing.k", "slots", "slot_ghz", "guard_slots",
      "xt.k", "xt.r", "xt.beta", "xt.pitch", "xt.occupancy_aware", "modulation.enabled",
      "traffic.load_erlang", "traffic.mean_holding", "traffic.seed", "traffic.bitrate_min",
      "traffic.bitrate_max", "traffic.discrete_step", "policy", "scma.partitions",
      "stats.window", "stats.warmup_fraction",
      "env.requests_per_episode", "env.reset_state", "env.action_mode", "env.blocks",
      "env.features", "env.reward_field",
      "run.loads", "run.seeds", "run.requests", "run.workers"};
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto& t = handlers();
  const auto it = t.find(trim(key));
  if (it == t.end()) throw ValidationError(std::string(trim(key)), "unknown key");
  it->second.set(cfg, value);
}

std::string setting_value(const RunConfig& cfg, std::string_view key) {
  const auto& t = handlers();
  const auto it = t.find(key);
  if (it == t.end()) throw ValidationError(std::string(key), "unknown key");
  return it->second.get(cfg);
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  if (!cfg.topology.empty() && !base_dir.empty()) {
    const std::filesystem::path p(cfg.topology);
    if (p.is_relative()) cfg.topology = (base_dir / p).lexically_normal().string();
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

std::vector<Diagnostic> diagnose(const RunConfig& cfg, bool check_topology) {
  std::vector<Diagnostic> out;
  auto check = [&out](const char* key, auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      out.push_back({e.field(), what.substr(std::min(what.size(), e.field().size() + 2))});
    } catch (const std::exception& e) {
      out.push_back({key, e.what()});
    }
  };
  check("xt", [&] { cfg.engine.physics.xt.validate(); });
  check("modulation", [&] {
    PhysicsConfig p = cfg.engine.physics;
    p.xt = {};
    p.validate();
  });
  check("traffic", [&] { cfg.engine.traffic.validate(); });
  check("slots", [&] {
    if (cfg.engine.slots < 0) throw ValidationError("slots", "must be >= 0");
  });
  check("stats", [&] {
    if (cfg.engine.window_size < 1) throw ValidationError("stats.window", "must be >= 1");
    if (!(cfg.engine.warmup_fraction >= 0.0 && cfg.engine.warmup_fraction < 1.0))
      throw ValidationError("stats.warmup_fraction", "must lie in [0, 1)");
  });
  check("env", [&] { cfg.env.validate(); });
  check("policy", [&] {
    if (std::find(std::begin(kPolicyNames), std::end(kPolicyNames), cfg.policy) == std::end(kPolicyNames))
      throw ValidationError("policy", "unknown policy '" + cfg.policy +
                                          "' (allowed: ksp-ff-fca, ksp-rf-rca, ksp-scma, agent)");
  });
  check("scma.partitions", [&] { validate_scma_partitions(cfg.resolved_scma(), cfg.engine.slots); });
  check("routing.k", [&] {
    if (cfg.k_paths < 1) throw ValidationError("routing.k", "must be >= 1");
  });
  check("run.loads", [&] {
    if (cfg.loads.empty()) throw ValidationError("run.loads", "at least one load required");
    for (double l : cfg.loads)
      if (!(l > 0.0)) throw ValidationError("run.loads", "loads must be > 0");
  });
  check("run.seeds", [&] {
    if (cfg.seeds.empty()) throw ValidationError("run.seeds", "at least one seed required");
  });
  check("run.requests", [&] {
    if (cfg.requests < 1) throw ValidationError("run.requests", "must be >= 1");
  });
  check("run.workers", [&] {
    if (cfg.workers < 1) throw ValidationError("run.workers", "must be >= 1");
  });
  if (check_topology) {
    check("topology", [&] {
      if (cfg.topology.empty()) throw ValidationError("topology", "no topology file given");
      Topology::load(cfg.topology, std::max(1, cfg.k_paths));
    });
  }
  return out;
}

void validate(const RunConfig& cfg, bool check_topology) {
  const auto problems = diagnose(cfg, check_topology);
  if (!problems.empty()) throw ValidationError(problems.front().key, problems.front().message);
}

std::string describe(const RunConfig& cfg) {
  std::string out;
  for (const auto& key : config_keys()) out += key + " = " + setting_value(cfg, key) + "\n";
  return out;
}

std::unique_ptr<Policy> make_policy(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.policy == "ksp-ff-fca") return std::make_unique<KspFirstFit>();
  if (cfg.policy == "ksp-rf-rca") return std::make_unique<KspRandomFit>(seed);
  if (cfg.policy == "ksp-scma") {
    auto parts = cfg.resolved_scma();
    validate_scma_partitions(parts, cfg.engine.slots);
    return std::make_unique<KspScma>(std::move(parts));
  }
  if (cfg.policy == "agent") throw ValidationError("policy", "agent is driven through the environment");
  throw ValidationError("policy", "unknown policy '" + cfg.policy + "'");
}

Model::Model(RunConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_, false);
  if (cfg_.topology.empty()) throw ValidationError("topology", "no topology file given");
  topology_ = std::make_shared<const Topology>(Topology::load(cfg_.topology, cfg_.k_paths));
}

EngineConfig Model::engine_config(double load, std::uint64_t seed) const {
  EngineConfig e = cfg_.engine;
  e.traffic.load_erlang = load;
  e.traffic.seed = seed;
  return e;
}

RunResult run_heuristic(const Model& model, double load, std::uint64_t seed) {
  Simulator sim(model.topology(), model.engine_config(load, seed));
  auto policy = make_policy(model.config(), seed);
  const BlockingStats stats = sim.run(*policy, model.config().requests);
  return RunResult{load, model.config().policy, seed, stats.steady, stats.all, stats.windows};
}

RunResult run_random_agent(const Model& model, double load, std::uint64_t seed) {
  const RunConfig& cfg = model.config();
  RmscaEnv env(model.topology(), model.engine_config(load, seed), cfg.env, seed);
  Rng rng = Rng(seed).split(0x6167656e74ULL);
  const auto shape = env.descriptor().action_shape;
  RunResult out{load, "agent", seed, {}, {}, {}};
  const auto warmup = static_cast<std::uint64_t>(std::floor(cfg.engine.warmup_fraction * static_cast<double>(cfg.requests)));
  std::uint64_t window_offered = 0, window_blocked = 0;
  env.reset();
  for (std::uint64_t i = 0; i < cfg.requests; ++i) {
    if (env.done()) env.reset();
    RmscaAction a;
    a.k = static_cast<int>(rng.below(static_cast<std::uint64_t>(shape[0])));
    a.c = static_cast<int>(rng.below(static_cast<std::uint64_t>(shape[1])));
    a.j = shape[2] > 0 ? static_cast<int>(rng.below(static_cast<std::uint64_t>(shape[2]))) : 0;
    const StepResult r = env.step(a);
    out.all.record(r.info.cause);
    if (i >= warmup) out.counters.record(r.info.cause);
    ++window_offered;
    if (r.info.cause != BlockCause::none) ++window_blocked;
    if (window_offered == static_cast<std::uint64_t>(cfg.engine.window_size)) {
      out.windows.push_back(static_cast<double>(window_blocked) / static_cast<double>(window_offered));
      window_offered = window_blocked = 0;
    }
  }
  return out;
}

RunResult run_once(const Model& model, double load, std::uint64_t seed) {
  return model.config().policy == "agent" ? run_random_agent(model, load, seed)
                                          : run_heuristic(model, load, seed);
}

} // namespace mcfsim
