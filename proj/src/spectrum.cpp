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

#include "mcfsim/spectrum.hpp"

#include "mcfsim/error.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace mcfsim {

SlotMask::SlotMask(int slots, bool value)
    : slots_(slots), words_((static_cast<std::size_t>(slots) + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  if (slots < 0) throw std::invalid_argument("SlotMask: negative size");
  trim();
}

void SlotMask::trim() {
  if (slots_ % 64 != 0 && !words_.empty())
    words_.back() &= (std::uint64_t{1} << (slots_ % 64)) - 1;
}

void SlotMask::set_range(int start, int end) {
  for (int s = start; s < end; ++s) set(s);
}

SlotMask& SlotMask::operator&=(const SlotMask& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

SlotMask& SlotMask::operator|=(const SlotMask& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

SlotMask SlotMask::operator~() const {
  SlotMask out = *this;
  for (auto& w : out.words_) w = ~w;
  out.trim();
  return out;
}

bool SlotMask::any_in(int start, int end) const { return next_set(start) < end; }

bool SlotMask::all_in(int start, int end) const { return next_clear(start) >= end; }

int SlotMask::count() const {
  int n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

int SlotMask::next_set(int from) const {
  if (from >= slots_) return slots_;
  auto wi = static_cast<std::size_t>(from) >> 6;
  std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
  while (true) {
    if (w != 0) {
      const int pos = static_cast<int>(wi * 64) + std::countr_zero(w);
      return pos < slots_ ? pos : slots_;
    }
    if (++wi >= words_.size()) return slots_;
    w = words_[wi];
  }
}

int SlotMask::next_clear(int from) const {
  if (from >= slots_) return slots_;
  auto wi = static_cast<std::size_t>(from) >> 6;
  std::uint64_t w = ~words_[wi] & (~std::uint64_t{0} << (from & 63));
  while (true) {
    if (w != 0) {
      const int pos = static_cast<int>(wi * 64) + std::countr_zero(w);
      return pos < slots_ ? pos : slots_;
    }
    if (++wi >= words_.size()) return slots_;
    w = ~words_[wi];
  }
}

SpectrumGrid::SpectrumGrid(int num_links, int cores, int slots)
    : num_links_(num_links), cores_(cores), slots_(slots) {
  if (num_links < 1 || cores < 1 || slots < 0)
    throw std::invalid_argument("SpectrumGrid: invalid dimensions");
  masks_.assign(static_cast<std::size_t>(num_links) * static_cast<std::size_t>(cores), SlotMask(slots));
}

void SpectrumGrid::check_core(int core) const {
  if (core < 0 || core >= cores_) throw std::out_of_range("core index out of range");
}

const SlotMask& SpectrumGrid::occupancy(LinkId link, int core) const {
  check_core(core);
  if (link < 0 || link >= num_links_) throw std::out_of_range("link index out of range");
  return masks_[static_cast<std::size_t>(link) * static_cast<std::size_t>(cores_) +
                static_cast<std::size_t>(core)];
}

SlotMask& SpectrumGrid::occupancy_mut(LinkId link, int core) {
  return const_cast<SlotMask&>(std::as_const(*this).occupancy(link, core));
}

SlotMask SpectrumGrid::route_free(const RoutePath& route, int core) const {
  SlotMask used(slots_);
  for (LinkId l : route.links) used |= occupancy(l, core);
  return ~used;
}

bool SpectrumGrid::window_free(const RoutePath& route, int core, SlotBlock block) const {
  if (block.size < 1 || block.start < 0 || block.end() > slots_) return false;
  for (LinkId l : route.links)
    if (occupancy(l, core).any_in(block.start, block.end())) return false;
  return true;
}

std::vector<SlotBlock> SpectrumGrid::find_blocks(const RoutePath& route, int core, int need,
                                                 int max_blocks) const {
  if (need < 1) throw std::invalid_argument("find_blocks: need must be >= 1");
  check_core(core);
  std::vector<SlotBlock> out;
  if (max_blocks == 0) return out;
  const SlotMask free = route_free(route, core);
  int pos = free.next_set(0);
  while (pos < slots_) {
    const int end = free.next_clear(pos);
    if (end - pos >= need) {
      out.push_back({pos, end - pos});
      if (max_blocks > 0 && static_cast<int>(out.size()) >= max_blocks) break;
    }
    pos = free.next_set(end);
  }
  return out;
}

void SpectrumGrid::allocate(const RoutePath& route, int core, SlotBlock block, ConnectionId id) {
  check_core(core);
  if (route.links.empty()) throw StateError("allocate: empty route");
  if (block.size < 1 || block.start < 0 || block.end() > slots_)
    throw StateError("allocate: block out of range");
  if (allocations_.contains(id))
    throw StateError("allocate: connection " + std::to_string(id) + " already allocated");
  for (LinkId l : route.links)
    if (occupancy(l, core).any_in(block.start, block.end()))
      throw StateError("allocate: slot collision on link " + std::to_string(l) + " core " +
                       std::to_string(core));
  for (LinkId l : route.links) occupancy_mut(l, core).set_range(block.start, block.end());
  allocations_.emplace(id, Allocation{route.links, core, block});
  occupied_ += route.links.size() * static_cast<std::size_t>(block.size);
}

void SpectrumGrid::release(ConnectionId id) {
  auto it = allocations_.find(id);
  if (it == allocations_.end())
    throw StateError("release: unknown connection " + std::to_string(id));
  const Allocation& a = it->second;
  for (LinkId l : a.links) {
    SlotMask& m = occupancy_mut(l, a.core);
    for (int s = a.block.start; s < a.block.end(); ++s) m.reset(s);
  }
  occupied_ -= a.links.size() * static_cast<std::size_t>(a.block.size);
  allocations_.erase(it);
}

void SpectrumGrid::clear() {
  for (auto& m : masks_) m = SlotMask(slots_);
  allocations_.clear();
  occupied_ = 0;
}

std::string SpectrumGrid::snapshot(LinkId link, int core) const {
  const SlotMask& m = occupancy(link, core);
  std::string out(static_cast<std::size_t>(slots_), '0');
  for (int s = 0; s < slots_; ++s)
    if (m.test(s)) out[static_cast<std::size_t>(s)] = '1';
  return out;
}

std::string SpectrumGrid::snapshot() const {
  std::ostringstream out;
  for (LinkId l = 0; l < num_links_; ++l)
    for (int c = 0; c < cores_; ++c) out << l << ' ' << c << ' ' << snapshot(l, c) << '\n';
  return out.str();
}

} // namespace mcfsim
