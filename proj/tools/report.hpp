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

// Plot-ready CSV reports for batches of simulation runs.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mcfsim::report {

struct RunRow {
  double load_erlang = 0.0;
  std::string policy;
  std::uint64_t seed = 0;
  std::uint64_t offered = 0;
  std::uint64_t established = 0;
  std::uint64_t blocked_spectrum = 0;
  std::uint64_t blocked_crosstalk = 0;
  std::uint64_t blocked_reach = 0;
  std::uint64_t blocked_no_route = 0;
  double blocking_probability = 0.0;

  bool operator==(const RunRow&) const = default;
};

struct SummaryRow {
  double load_erlang = 0.0;
  std::string policy;
  std::size_t seeds = 0;
  double mean = 0.0;
  double stddev = 0.0; // sample standard deviation over seeds
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t offered = 0;
  std::uint64_t blocked = 0;
};

// Two-sided 99% standard normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

inline constexpr std::string_view kRunsHeader =
    "load_erlang,policy,seed,offered,established,blocked_spectrum,blocked_crosstalk,"
    "blocked_reach,blocked_no_route,blocking_probability";

// Shortest text that reads back to the same double.
std::string format_double(double x);

// Rows sorted by (load, policy, seed) first.
std::string runs_csv(std::vector<RunRow> rows);
std::vector<RunRow> parse_runs_csv(std::string_view text);

// Mean blocking over seeds per (load, policy), with a normal-approximation
// 99% interval mean +- z * s / sqrt(n) (zero width for a single seed).
std::vector<SummaryRow> summarize(const std::vector<RunRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);

std::string series_csv(const std::vector<double>& windows);
std::string series_filename(std::string_view policy, double load, std::uint64_t seed);

} // namespace mcfsim::report
