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

#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace mcfsim::report {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = line.find(',');
    out.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return out;
}

template <typename T>
T number(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("runs.csv: bad number '" + std::string(s) + "'");
  return v;
}

auto key(const RunRow& r) { return std::tie(r.load_erlang, r.policy, r.seed); }

} // namespace

std::string runs_csv(std::vector<RunRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) { return key(a) < key(b); });
  std::string out(kRunsHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_double(r.load_erlang) + ',' + r.policy + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.offered) + ',' + std::to_string(r.established) + ',' +
           std::to_string(r.blocked_spectrum) + ',' + std::to_string(r.blocked_crosstalk) + ',' +
           std::to_string(r.blocked_reach) + ',' + std::to_string(r.blocked_no_route) + ',' +
           format_double(r.blocking_probability) + '\n';
  }
  return out;
}

std::vector<RunRow> parse_runs_csv(std::string_view text) {
  std::vector<RunRow> rows;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty()) continue;
    if (header) {
      if (line != kRunsHeader) throw std::runtime_error("runs.csv: unexpected header");
      header = false;
      continue;
    }
    const auto f = fields(line);
    if (f.size() != 10) throw std::runtime_error("runs.csv: expected 10 columns");
    rows.push_back({number<double>(f[0]), std::string(f[1]), number<std::uint64_t>(f[2]),
                    number<std::uint64_t>(f[3]), number<std::uint64_t>(f[4]), number<std::uint64_t>(f[5]),
                    number<std::uint64_t>(f[6]), number<std::uint64_t>(f[7]), number<std::uint64_t>(f[8]),
                    number<double>(f[9])});
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<RunRow>& rows) {
  std::map<std::pair<double, std::string>, std::vector<const RunRow*>> groups;
  for (const auto& r : rows) groups[{r.load_erlang, r.policy}].push_back(&r);
  std::vector<SummaryRow> out;
  for (auto& [k, members] : groups) {
    std::sort(members.begin(), members.end(), [](const RunRow* a, const RunRow* b) { return a->seed < b->seed; });
    SummaryRow s;
    s.load_erlang = k.first;
    s.policy = k.second;
    s.seeds = members.size();
    double sum = 0.0;
    for (const auto* r : members) {
      sum += r->blocking_probability;
      s.offered += r->offered;
      s.blocked += r->offered - r->established;
    }
    const double n = static_cast<double>(s.seeds);
    s.mean = sum / n;
    double ss = 0.0;
    for (const auto* r : members) ss += (r->blocking_probability - s.mean) * (r->blocking_probability - s.mean);
    s.stddev = s.seeds > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const double half = kZ99 * s.stddev / std::sqrt(n);
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;
    out.push_back(std::move(s));
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "# mean_blocking: average of per-seed steady-state blocking probability; "
      "ci99: normal approximation mean +- 2.5758 * stddev / sqrt(seeds)\n"
      "load_erlang,policy,seeds,mean_blocking,stddev_blocking,ci99_low,ci99_high,offered,blocked\n";
  for (const auto& s : rows) {
    out += format_double(s.load_erlang) + ',' + s.policy + ',' + std::to_string(s.seeds) + ',' +
           format_double(s.mean) + ',' + format_double(s.stddev) + ',' + format_double(s.ci_low) + ',' +
           format_double(s.ci_high) + ',' + std::to_string(s.offered) + ',' + std::to_string(s.blocked) + '\n';
  }
  return out;
}

std::string series_csv(const std::vector<double>& windows) {
  std::string out = "window_index,blocking\n";
  for (std::size_t i = 0; i < windows.size(); ++i) out += std::to_string(i) + ',' + format_double(windows[i]) + '\n';
  return out;
}

std::string series_filename(std::string_view policy, double load, std::uint64_t seed) {
  return std::string(policy) + "_load" + format_double(load) + "_seed" + std::to_string(seed) + ".csv";
}

} // namespace mcfsim::report
