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

#include "mcfsim/physics.hpp"

#include "mcfsim/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace mcfsim {

namespace {

constexpr std::array<ModulationFormat, 6> kFormats{{
    {"BPSK", 1, 8000.0, -14.0},
    {"QPSK", 2, 4000.0, -18.0},
    {"8QAM", 3, 2000.0, -21.0},
    {"16QAM", 4, 1000.0, -25.0},
    {"32QAM", 5, 500.0, -27.0},
    {"64QAM", 6, 250.0, -34.0},
}};

std::string normalized(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != '-' && c != '_' && !std::isspace(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

} // namespace

std::span<const ModulationFormat> modulation_table() { return kFormats; }

const ModulationFormat& modulation_by_name(std::string_view name) {
  const std::string key = normalized(name);
  for (const auto& f : kFormats)
    if (key == f.name) return f;
  throw ValidationError("modulation.enabled",
                        "unknown modulation format '" + std::string(name) +
                            "' (allowed: BPSK, QPSK, 8QAM, 16QAM, 32QAM, 64QAM)");
}

std::vector<ModulationFormat> default_enabled_modulations() {
  return {kFormats[0], kFormats[1], kFormats[2], kFormats[3]};
}

void XtParams::validate() const {
  auto check = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(key, "must be strictly positive");
  };
  check(coupling, "xt.k");
  check(bend_radius, "xt.r");
  check(propagation, "xt.beta");
  check(core_pitch, "xt.pitch");
}

double mean_xt_per_length(const XtParams& p) {
  return 2.0 * p.coupling * p.coupling * p.bend_radius / (p.propagation * p.core_pitch);
}

double xt_generic(double h, std::span<const double> adjacent_lengths_m) {
  double sum = 0.0;
  for (double l : adjacent_lengths_m) sum += h * l;
  return sum;
}

double xt_closed_form(int n, double h, double length_m) {
  if (n <= 0 || length_m <= 0.0) return 0.0;
  const double x = (n + 1) * h * length_m;
  const double nd = static_cast<double>(n);
  // n (1 - e^{-x}); expm1 keeps precision when x is tiny.
  return nd * -std::expm1(-x) / (1.0 + nd * std::exp(-x));
}

double xt_db_over_links(std::span<const double> link_lengths_km, double h,
                        std::span<const int> neighbours_per_link) {
  if (neighbours_per_link.size() != link_lengths_km.size())
    throw std::invalid_argument("xt_db_over_links: size mismatch");
  double linear = 0.0;
  for (std::size_t i = 0; i < link_lengths_km.size(); ++i)
    linear += xt_closed_form(neighbours_per_link[i], h, link_lengths_km[i] * 1000.0);
  if (linear <= 0.0) return kNoCrosstalkDb;
  return 10.0 * std::log10(linear);
}

double xt_db_over_links(std::span<const double> link_lengths_km, double h, int neighbours) {
  const std::vector<int> n(link_lengths_km.size(), neighbours);
  return xt_db_over_links(link_lengths_km, h, n);
}

double route_xt_db(const Topology& t, const RoutePath& route, const XtParams& p, int n) {
  if (route.links.empty()) throw std::invalid_argument("route_xt_db: empty route");
  std::vector<double> lengths;
  lengths.reserve(route.links.size());
  for (LinkId l : route.links) lengths.push_back(t.link(l).length_km);
  return xt_db_over_links(lengths, mean_xt_per_length(p), n);
}

std::optional<ModulationFormat> select_modulation(double route_length_km,
                                                  std::span<const ModulationFormat> enabled) {
  std::optional<ModulationFormat> best;
  for (const auto& m : enabled)
    if (m.max_reach_km >= route_length_km && (!best || m.bits_per_symbol > best->bits_per_symbol))
      best = m;
  return best;
}

SlotDemand required_slots(double bitrate_gbps, const ModulationFormat& m, int guard_slots,
                          double slot_ghz) {
  if (!(bitrate_gbps > 0.0)) throw std::invalid_argument("required_slots: bitrate must be > 0");
  const double ratio = bitrate_gbps / (slot_ghz * m.bits_per_symbol);
  // Tolerance keeps exact multiples (100 / 25) from rounding up.
  const int data = std::max(1, static_cast<int>(std::ceil(ratio - 1e-9)));
  return SlotDemand{data, guard_slots};
}

bool xt_feasible(double xt_db, const ModulationFormat& m) { return xt_db <= m.xt_threshold_db; }

} // namespace mcfsim
