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

// mcfsim command line: benchmark runs over a (load x seed) grid, config
// validation and the agent environment descriptor. Talks to the simulator
// only through the C API.

#include "mcfsim/mcfsim.h"
#include "report.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using mcfsim::report::RunRow;

namespace {

std::mutex log_mutex;

void log(const std::string& msg) {
  std::lock_guard lock(log_mutex);
  std::cerr << "mcfsim: " << msg << '\n';
}

struct Failure {
  int exit_code;
  std::string message;
};

void check(mcf_status s, const std::string& what, int exit_code = 3) {
  if (s != MCF_OK) throw Failure{exit_code, what + ": " + mcf_last_error()};
}

template <typename T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(ptr); }
};

using Config = Handle<mcf_config, mcf_config_destroy>;
using Model = Handle<mcf_model, mcf_model_destroy>;
using Result = Handle<mcf_result, mcf_result_destroy>;
using Env = Handle<mcf_env, mcf_env_destroy>;

template <typename Fn>
std::string read_string(Fn&& fn) {
  size_t need = 0;
  mcf_status s = fn(nullptr, 0, &need);
  if (s != MCF_OK && s != MCF_ERR_BUFFER_TOO_SMALL) check(s, "query");
  std::string out(need, '\0');
  check(fn(out.data(), out.size(), &need), "query");
  out.resize(need > 0 ? need - 1 : 0);
  return out;
}

std::string config_get(const mcf_config* cfg, const char* key) {
  return read_string([&](char* b, size_t c, size_t* n) { return mcf_config_get(cfg, key, b, c, n); });
}

template <typename T>
std::vector<T> list_of(const std::string& text) {
  std::vector<T> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    T v{};
    std::from_chars(item.data(), item.data() + item.size(), v);
    out.push_back(v);
    rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
  }
  return out;
}

struct Overrides {
  std::string config;
  std::optional<std::string> topology, policy, loads, seeds, requests, workers;
  std::vector<std::string> settings;
};

void add_override_flags(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config, "key = value configuration file");
  cmd.add_option("--topology", o.topology, "topology JSON file");
  cmd.add_option("--policy", o.policy, "ksp-ff-fca | ksp-rf-rca | ksp-scma | agent");
  cmd.add_option("--loads", o.loads, "loads in Erlang, e.g. 250 or 500-3000:500");
  cmd.add_option("--seeds", o.seeds, "seeds, e.g. 1,2,3 or 1-5");
  cmd.add_option("--requests", o.requests, "requests per run");
  cmd.add_option("--set", o.settings, "extra key=value setting (repeatable)");
}

void build_config(const Overrides& o, Config& cfg) {
  if (!o.config.empty())
    check(mcf_config_load(o.config.c_str(), &cfg.ptr), "config " + o.config, 1);
  else
    check(mcf_config_create(&cfg.ptr), "config", 1);
  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) check(mcf_config_set(cfg.ptr, key, v->c_str()), std::string("--") + key, 1);
  };
  set("topology", o.topology);
  set("policy", o.policy);
  set("run.loads", o.loads);
  set("run.seeds", o.seeds);
  set("run.requests", o.requests);
  set("run.workers", o.workers);
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Failure{1, "--set expects key=value, got '" + kv + "'"};
    check(mcf_config_set(cfg.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set " + kv, 1);
  }
}

// Prints every problem to stderr; true when the configuration is usable.
bool report_diagnostics(const mcf_config* cfg) {
  size_t problems = 0;
  const std::string text = read_string(
      [&](char* b, size_t c, size_t* n) { return mcf_config_diagnose(cfg, b, c, n, &problems); });
  if (problems == 0) return true;
  std::cerr << text;
  log(std::to_string(problems) + " configuration problem(s)");
  return false;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Failure{3, "cannot write " + path.string()};
}

struct Job {
  double load;
  std::uint64_t seed;
};

struct JobResult {
  RunRow row;
  std::vector<double> windows;
  std::string error;
};

JobResult run_job(const mcf_model* model, const std::string& policy, const Job& job) {
  JobResult r;
  Result result;
  if (mcf_run(model, job.load, job.seed, &result.ptr) != MCF_OK) {
    r.error = mcf_last_error();
    return r;
  }
  mcf_counts c{};
  mcf_result_counts(result.ptr, &c, nullptr);
  r.row = {job.load, policy, job.seed, c.offered, c.established, c.blocked_spectrum, c.blocked_crosstalk,
           c.blocked_reach, c.blocked_no_route, c.blocking_probability};
  r.windows.resize(mcf_result_window_count(result.ptr));
  if (!r.windows.empty()) mcf_result_windows(result.ptr, r.windows.data(), r.windows.size());
  return r;
}

int cmd_run(const Overrides& o, const std::string& out_dir) {
  Config cfg;
  build_config(o, cfg);
  if (!report_diagnostics(cfg.ptr)) return 1;
  Model model;
  check(mcf_model_create(cfg.ptr, &model.ptr), "model", 1);

  const auto loads = list_of<double>(config_get(cfg.ptr, "run.loads"));
  const auto seeds = list_of<std::uint64_t>(config_get(cfg.ptr, "run.seeds"));
  const int workers = std::stoi(config_get(cfg.ptr, "run.workers"));
  const std::string policy = config_get(cfg.ptr, "policy");

  std::vector<Job> jobs;
  for (double l : loads)
    for (auto s : seeds) jobs.push_back({l, s});
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0}, finished{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      results[i] = run_job(model.ptr, policy, jobs[i]);
      const auto done = ++finished;
      log("run " + std::to_string(done) + "/" + std::to_string(jobs.size()) + " load=" +
          mcfsim::report::format_double(jobs[i].load) + " seed=" + std::to_string(jobs[i].seed) +
          (results[i].error.empty()
               ? " blocking=" + mcfsim::report::format_double(results[i].row.blocking_probability)
               : " failed"));
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), jobs.size());
  log(std::to_string(jobs.size()) + " run(s) of " + policy + " on " + std::to_string(n_threads) + " worker(s)");
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<RunRow> rows;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!results[i].error.empty()) throw Failure{3, "run load=" + mcfsim::report::format_double(jobs[i].load) +
                                                        " seed=" + std::to_string(jobs[i].seed) + ": " +
                                                        results[i].error};
    rows.push_back(results[i].row);
  }

  const fs::path out(out_dir);
  fs::create_directories(out / "series");
  write_file(out / "runs.csv", mcfsim::report::runs_csv(rows));
  write_file(out / "summary.csv", mcfsim::report::summary_csv(mcfsim::report::summarize(rows)));
  for (std::size_t i = 0; i < jobs.size(); ++i)
    write_file(out / "series" / mcfsim::report::series_filename(policy, jobs[i].load, jobs[i].seed),
               mcfsim::report::series_csv(results[i].windows));
  write_file(out / "config.txt",
             read_string([&](char* b, size_t c, size_t* n) { return mcf_config_describe(cfg.ptr, b, c, n); }));
  log("reports written to " + out.string());
  return 0;
}

int cmd_validate(const Overrides& o) {
  Config cfg;
  build_config(o, cfg);
  const bool ok = report_diagnostics(cfg.ptr);
  std::cout << read_string([&](char* b, size_t c, size_t* n) { return mcf_config_describe(cfg.ptr, b, c, n); });
  if (ok) std::cout << "valid\n";
  return ok ? 0 : 1;
}

int cmd_env(const Overrides& o) {
  Config cfg;
  build_config(o, cfg);
  if (!report_diagnostics(cfg.ptr)) return 1;
  Model model;
  check(mcf_model_create(cfg.ptr, &model.ptr), "model", 1);
  Env env;
  check(mcf_env_create(model.ptr, 1, &env.ptr), "env");
  std::cout << read_string([&](char* b, size_t c, size_t* n) { return mcf_env_describe(env.ptr, b, c, n); })
            << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multicore-fiber elastic optical network simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mcf_version());

  Overrides run_o, validate_o, env_o;
  std::string out_dir = "results";
  auto* run = app.add_subcommand("run", "run every (load, seed) pair and write CSV reports");
  add_override_flags(*run, run_o);
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--workers", run_o.workers, "concurrent runs");
  auto* validate = app.add_subcommand("validate", "check a configuration and print resolved settings");
  add_override_flags(*validate, validate_o);
  auto* env = app.add_subcommand("env", "print the agent environment descriptor as JSON");
  add_override_flags(*env, env_o);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_o, out_dir);
    if (*validate) return cmd_validate(validate_o);
    if (*env) return cmd_env(env_o);
  } catch (const Failure& f) {
    log(f.message);
    return f.exit_code;
  } catch (const std::exception& e) {
    log(e.what());
    return 3;
  }
  return 0;
}
