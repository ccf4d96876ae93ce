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

#include "report.hpp"

#include <cmath>

using namespace mcfsim::report;

namespace {

RunRow row(double load, std::uint64_t seed, std::uint64_t offered, std::uint64_t established) {
  RunRow r;
  r.load_erlang = load;
  r.policy = "ksp-ff-fca";
  r.seed = seed;
  r.offered = offered;
  r.established = established;
  r.blocked_spectrum = offered - established;
  r.blocking_probability = static_cast<double>(offered - established) / static_cast<double>(offered);
  return r;
}

} // namespace

TEST_SUITE("report") {

TEST_CASE("runs.csv round trip, sorted by load and seed") {
  std::vector<RunRow> rows{row(1000, 2, 900, 700), row(500, 3, 900, 850), row(500, 1, 900, 801),
                           row(1000, 1, 900, 712)};
  rows[0].blocked_crosstalk = 3;
  rows[0].blocked_spectrum -= 3;
  const auto text = runs_csv(rows);
  CHECK(text.rfind(std::string(kRunsHeader) + "\n", 0) == 0);
  const auto back = parse_runs_csv(text);
  REQUIRE(back.size() == 4);
  CHECK(back[0] == rows[2]);
  CHECK(back[1] == rows[1]);
  CHECK(back[2] == rows[3]);
  CHECK(back[3] == rows[0]);
  CHECK(runs_csv(back) == text);
  CHECK_THROWS(parse_runs_csv("bad,header\n"));
}

TEST_CASE("summary equals recomputation from rows") {
  std::vector<RunRow> rows;
  const double bp[] = {0.11, 0.13, 0.12, 0.10, 0.14};
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto r = row(750, s + 1, 1000, static_cast<std::uint64_t>(std::lround(1000 * (1 - bp[s]))));
    rows.push_back(r);
  }
  rows.push_back(row(250, 1, 1000, 990));
  const auto sum = summarize(parse_runs_csv(runs_csv(rows)));
  REQUIRE(sum.size() == 2);
  CHECK(sum[0].load_erlang == 250);
  CHECK(sum[0].seeds == 1);
  CHECK(sum[0].ci_low == sum[0].ci_high);
  const auto& s = sum[1];
  CHECK(s.seeds == 5);
  CHECK(s.mean == doctest::Approx(0.12));
  // squared deviations sum to 1e-3 over 4 degrees of freedom
  CHECK(s.stddev == doctest::Approx(std::sqrt(2.5e-4)));
  CHECK(s.ci_high - s.mean == doctest::Approx(2.5758293035489004 * std::sqrt(2.5e-4) / std::sqrt(5.0)));
  CHECK(s.offered == 5000);
  CHECK(s.blocked == 600);
  const auto csv = summary_csv(sum);
  CHECK(csv.rfind("# mean_blocking", 0) == 0);
  CHECK(csv.find("750,ksp-ff-fca,5,0.12") != std::string::npos);
}

TEST_CASE("number formatting is exact") {
  CHECK(format_double(250) == "250");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("series files") {
  CHECK(series_csv({0.5, 0.25}) == "window_index,blocking\n0,0.5\n1,0.25\n");
  CHECK(series_filename("ksp-scma", 1500, 3) == "ksp-scma_load1500_seed3.csv");
}

}
