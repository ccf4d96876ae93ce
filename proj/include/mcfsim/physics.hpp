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

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcfsim {

struct ModulationFormat {
  std::string_view name;
  int bits_per_symbol = 1;
  double max_reach_km = 0.0;
  double xt_threshold_db = 0.0;

  bool operator==(const ModulationFormat& o) const { return name == o.name; }
};

// BPSK..64QAM, ascending bits per symbol. Reach and XT thresholds:
//   BPSK 8000 km / -14 dB, QPSK 4000 / -18, 8QAM 2000 / -21,
//   16QAM 1000 / -25, 32QAM 500 / -27, 64QAM 250 / -34.
std::span<const ModulationFormat> modulation_table();

// Throws ValidationError("modulation.enabled", ...) for unknown names.
// Accepts "8QAM"/"8-QAM" spellings case-insensitively.
const ModulationFormat& modulation_by_name(std::string_view name);

// Default enabled set: BPSK, QPSK, 8QAM, 16QAM.
std::vector<ModulationFormat> default_enabled_modulations();

// Multicore fiber coupling parameters, SI units.
struct XtParams {
  double coupling = 4.0e-4;    // k, 1/m
  double bend_radius = 0.05;   // r, m
  double propagation = 4.0e6;  // beta, 1/m
  double core_pitch = 4.0e-5;  // Lambda, m

  // Throws ValidationError naming the xt.* key of the first bad value.
  void validate() const;
};

inline constexpr double kNoCrosstalkDb = -std::numeric_limits<double>::infinity();

// Mean power-coupling coefficient per unit length, h = 2 k^2 r / (beta Lambda).
double mean_xt_per_length(const XtParams& p);

// First-order total XT on a core: sum of h * L over its adjacent cores.
double xt_generic(double h, std::span<const double> adjacent_lengths_m);

// Closed-form mean XT for n equidistant neighbours over length_m:
// (n - n e^{-(n+1)hL}) / (1 + n e^{-(n+1)hL}).
double xt_closed_form(int n, double h, double length_m);

// Sum of closed-form linear XT over links, in dB (kNoCrosstalkDb for zero).
double xt_db_over_links(std::span<const double> link_lengths_km, double h,
                        std::span<const int> neighbours_per_link);
double xt_db_over_links(std::span<const double> link_lengths_km, double h, int neighbours);

// Worst-case XT of a route with n neighbours on every link.
double route_xt_db(const Topology& t, const RoutePath& route, const XtParams& p, int n);

std::optional<ModulationFormat> select_modulation(double route_length_km,
                                                  std::span<const ModulationFormat> enabled);

struct SlotDemand {
  int data_slots = 1;
  int guard_slots = 0;
  int total() const { return data_slots + guard_slots; }
  bool operator==(const SlotDemand&) const = default;
};

SlotDemand required_slots(double bitrate_gbps, const ModulationFormat& m, int guard_slots,
                          double slot_ghz = 12.5);

// xt_db at or below the threshold passes.
bool xt_feasible(double xt_db, const ModulationFormat& m);

} // namespace mcfsim
