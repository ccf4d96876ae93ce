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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mcfsim {

using NodeId = std::int32_t;
using LinkId = std::int32_t;

// Undirected fiber link. Both directions share one spectrum.
struct Link {
  LinkId id = 0;
  NodeId a = 0;
  NodeId b = 0;
  double length_km = 0.0;
  int core_count = 1;
  // Cores adjacent to any given core (n of the crosstalk model).
  int adjacency_degree = 0;
};

struct RoutePath {
  std::vector<NodeId> nodes; // src first, dst last
  std::vector<LinkId> links; // links[i] joins nodes[i] and nodes[i + 1]
  double length_km = 0.0;
  int rank = 1; // 1 = shortest

  std::size_t hops() const { return links.size(); }
};

// Validated network graph plus the precomputed candidate routes of every
// ordered node pair. Immutable after construction.
class Topology {
public:
  // Throws ValidationError naming the offending field.
  Topology(int num_nodes, std::vector<Link> links, int cores, int core_adjacency,
           int k_paths, std::string name = {});

  static Topology parse(std::string_view document, int k_paths);
  static Topology load(const std::filesystem::path& path, int k_paths);

  const std::string& name() const { return name_; }
  int num_nodes() const { return num_nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_.at(static_cast<std::size_t>(id)); }
  int cores() const { return cores_; }
  int core_adjacency() const { return core_adjacency_; }
  int k_paths() const { return k_paths_; }

  // Candidate routes for (src, dst), ascending by length. Empty when src == dst.
  const std::vector<RoutePath>& routes(NodeId src, NodeId dst) const;

  // Neighbours of `node` as (neighbour, link) sorted by neighbour index.
  const std::vector<std::pair<NodeId, LinkId>>& adjacent(NodeId node) const {
    return adjacency_.at(static_cast<std::size_t>(node));
  }

  std::string to_document() const;

private:
  std::string name_;
  int num_nodes_;
  std::vector<Link> links_;
  int cores_;
  int core_adjacency_;
  int k_paths_;
  std::vector<std::vector<std::pair<NodeId, LinkId>>> adjacency_;
  std::vector<std::vector<RoutePath>> routes_;
};

// Up to k loopless paths from src to dst, ascending by length, ties broken by
// lexicographic node sequence. Throws std::invalid_argument for src == dst or
// k < 1 and mcfsim::Error when dst is unreachable.
std::vector<RoutePath> k_shortest_paths(const Topology& topology, NodeId src,
                                        NodeId dst, int k);

// Total order used for route ranking: length (with a relative tolerance of
// 1e-9), then node sequence.
bool route_precedes(const RoutePath& lhs, const RoutePath& rhs);

} // namespace mcfsim
