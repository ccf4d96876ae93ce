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

#include "mcfsim/topology.hpp"

#include "mcfsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mcfsim {

namespace {

bool same_length(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

double path_length(const Topology& t, const std::vector<LinkId>& links) {
  double sum = 0.0;
  for (LinkId l : links) sum += t.link(l).length_km;
  return sum;
}

// Shortest path from `from` to `to` avoiding blocked nodes and links. Among
// equal-length paths the lexicographically smallest node sequence wins.
// Returns false when `to` cannot be reached.
bool lexmin_shortest(const Topology& t, NodeId from, NodeId to,
                     const std::vector<char>& blocked_node,
                     const std::vector<char>& blocked_link, RoutePath& out) {
  const auto n = static_cast<std::size_t>(t.num_nodes());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<std::size_t>(to)] = 0.0;
  heap.emplace(0.0, to);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (auto [v, l] : t.adjacent(u)) {
      if (blocked_link[static_cast<std::size_t>(l)] || blocked_node[static_cast<std::size_t>(v)]) continue;
      const double nd = d + t.link(l).length_km;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  if (!std::isfinite(dist[static_cast<std::size_t>(from)])) return false;

  out.nodes.assign(1, from);
  out.links.clear();
  std::vector<char> visited(n, 0);
  visited[static_cast<std::size_t>(from)] = 1;
  NodeId u = from;
  while (u != to) {
    const double du = dist[static_cast<std::size_t>(u)];
    bool advanced = false;
    // adjacent() is sorted by neighbour, so the first tight edge is lex-min.
    for (auto [v, l] : t.adjacent(u)) {
      const auto vi = static_cast<std::size_t>(v);
      if (blocked_link[static_cast<std::size_t>(l)] || blocked_node[vi] || visited[vi]) continue;
      if (!std::isfinite(dist[vi])) continue;
      if (same_length(du, t.link(l).length_km + dist[vi])) {
        out.nodes.push_back(v);
        out.links.push_back(l);
        visited[vi] = 1;
        u = v;
        advanced = true;
        break;
      }
    }
    if (!advanced) return false;
  }
  out.length_km = path_length(t, out.links);
  return true;
}

} // namespace

bool route_precedes(const RoutePath& lhs, const RoutePath& rhs) {
  if (!same_length(lhs.length_km, rhs.length_km)) return lhs.length_km < rhs.length_km;
  return lhs.nodes < rhs.nodes;
}

std::vector<RoutePath> k_shortest_paths(const Topology& t, NodeId src, NodeId dst, int k) {
  if (k < 1) throw std::invalid_argument("k_shortest_paths: k must be >= 1");
  if (src == dst) throw std::invalid_argument("k_shortest_paths: src == dst");
  if (src < 0 || dst < 0 || src >= t.num_nodes() || dst >= t.num_nodes())
    throw std::invalid_argument("k_shortest_paths: node out of range");

  const auto n = static_cast<std::size_t>(t.num_nodes());
  const auto m = t.links().size();
  std::vector<char> blocked_node(n, 0);
  std::vector<char> blocked_link(m, 0);

  std::vector<RoutePath> accepted;
  RoutePath first;
  if (!lexmin_shortest(t, src, dst, blocked_node, blocked_link, first))
    throw Error("no path between node " + std::to_string(src) + " and node " +
                std::to_string(dst));
  accepted.push_back(std::move(first));

  auto cmp = [](const RoutePath& a, const RoutePath& b) { return route_precedes(a, b); };
  std::set<RoutePath, decltype(cmp)> candidates(cmp);
  std::set<std::vector<NodeId>> seen{accepted.front().nodes};

  while (static_cast<int>(accepted.size()) < k) {
    const RoutePath prev = accepted.back();
    for (std::size_t i = 0; i + 1 < prev.nodes.size(); ++i) {
      const NodeId spur = prev.nodes[i];
      std::fill(blocked_node.begin(), blocked_node.end(), 0);
      std::fill(blocked_link.begin(), blocked_link.end(), 0);
      for (const auto& p : accepted) {
        if (p.nodes.size() > i + 1 &&
            std::equal(p.nodes.begin(), p.nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                       prev.nodes.begin()))
          blocked_link[static_cast<std::size_t>(p.links[i])] = 1;
      }
      for (std::size_t r = 0; r < i; ++r) blocked_node[static_cast<std::size_t>(prev.nodes[r])] = 1;

      RoutePath spur_path;
      if (!lexmin_shortest(t, spur, dst, blocked_node, blocked_link, spur_path)) continue;

      RoutePath total;
      total.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + static_cast<std::ptrdiff_t>(i));
      total.nodes.insert(total.nodes.end(), spur_path.nodes.begin(), spur_path.nodes.end());
      total.links.assign(prev.links.begin(), prev.links.begin() + static_cast<std::ptrdiff_t>(i));
      total.links.insert(total.links.end(), spur_path.links.begin(), spur_path.links.end());
      total.length_km = path_length(t, total.links);
      if (seen.insert(total.nodes).second) candidates.insert(std::move(total));
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  for (std::size_t r = 0; r < accepted.size(); ++r) accepted[r].rank = static_cast<int>(r) + 1;
  return accepted;
}

Topology::Topology(int num_nodes, std::vector<Link> links, int cores, int core_adjacency,
                   int k_paths, std::string name)
    : name_(std::move(name)), num_nodes_(num_nodes), links_(std::move(links)), cores_(cores),
      core_adjacency_(core_adjacency), k_paths_(k_paths) {
  if (num_nodes_ < 2) throw ValidationError("nodes", "need at least 2 nodes");
  if (cores_ < 1) throw ValidationError("cores", "need at least 1 core per link");
  if (core_adjacency_ < 0 || core_adjacency_ > cores_ - 1)
    throw ValidationError("core_adjacency", "must lie in [0, cores - 1]");
  if (k_paths_ < 1) throw ValidationError("routing.k", "must be >= 1");
  if (links_.empty()) throw ValidationError("links", "no links");

  adjacency_.assign(static_cast<std::size_t>(num_nodes_), {});
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    Link& l = links_[i];
    const std::string field = "links[" + std::to_string(i) + "]";
    if (l.a < 0 || l.a >= num_nodes_) throw ValidationError(field + ".a", "node index out of range");
    if (l.b < 0 || l.b >= num_nodes_) throw ValidationError(field + ".b", "node index out of range");
    if (l.a == l.b) throw ValidationError(field, "self-loop");
    if (!(l.length_km > 0.0) || !std::isfinite(l.length_km))
      throw ValidationError(field + ".length_km", "must be a positive finite length");
    if (!pairs.insert(std::minmax(l.a, l.b)).second)
      throw ValidationError(field, "duplicate link between the same node pair");
    l.id = static_cast<LinkId>(i);
    l.core_count = cores_;
    l.adjacency_degree = core_adjacency_;
    adjacency_[static_cast<std::size_t>(l.a)].emplace_back(l.b, l.id);
    adjacency_[static_cast<std::size_t>(l.b)].emplace_back(l.a, l.id);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

  std::vector<char> reached(static_cast<std::size_t>(num_nodes_), 0);
  std::vector<NodeId> stack{0};
  reached[0] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (auto [v, l] : adjacent(u)) {
      if (!reached[static_cast<std::size_t>(v)]) {
        reached[static_cast<std::size_t>(v)] = 1;
        stack.push_back(v);
      }
    }
  }
  for (NodeId v = 0; v < num_nodes_; ++v)
    if (!reached[static_cast<std::size_t>(v)])
      throw ValidationError("links", "graph is disconnected (node " + std::to_string(v) +
                                         " unreachable from node 0)");

  routes_.assign(static_cast<std::size_t>(num_nodes_) * static_cast<std::size_t>(num_nodes_), {});
  for (NodeId s = 0; s < num_nodes_; ++s)
    for (NodeId d = 0; d < num_nodes_; ++d)
      if (s != d)
        routes_[static_cast<std::size_t>(s) * static_cast<std::size_t>(num_nodes_) +
                static_cast<std::size_t>(d)] = k_shortest_paths(*this, s, d, k_paths_);
}

const std::vector<RoutePath>& Topology::routes(NodeId src, NodeId dst) const {
  if (src < 0 || dst < 0 || src >= num_nodes_ || dst >= num_nodes_)
    throw std::out_of_range("Topology::routes: node out of range");
  return routes_[static_cast<std::size_t>(src) * static_cast<std::size_t>(num_nodes_) +
                 static_cast<std::size_t>(dst)];
}

namespace {

template <typename T>
T required(const nlohmann::json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(path + key, "missing field");
  const auto& v = obj.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ValidationError(path + key, "expected an integer");
  } else {
    if (!v.is_number()) throw ValidationError(path + key, "expected a number");
  }
  return v.get<T>();
}

} // namespace

Topology Topology::parse(std::string_view document, int k_paths) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("topology document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("topology document: top level must be an object");

  const int nodes = required<int>(doc, "nodes", "");
  const int cores = required<int>(doc, "cores", "");
  const int adjacency = required<int>(doc, "core_adjacency", "");
  if (!doc.contains("links") || !doc.at("links").is_array())
    throw ValidationError("links", "expected a list of {a, b, length_km}");
  std::vector<Link> links;
  std::size_t i = 0;
  for (const auto& item : doc.at("links")) {
    const std::string path = "links[" + std::to_string(i++) + "].";
    Link l;
    l.a = required<NodeId>(item, "a", path);
    l.b = required<NodeId>(item, "b", path);
    l.length_km = required<double>(item, "length_km", path);
    links.push_back(l);
  }
  std::string name = doc.contains("name") && doc.at("name").is_string()
                         ? doc.at("name").get<std::string>()
                         : std::string{};
  return Topology(nodes, std::move(links), cores, adjacency, k_paths, std::move(name));
}

Topology Topology::load(const std::filesystem::path& path, int k_paths) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open topology file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), k_paths);
}

std::string Topology::to_document() const {
  nlohmann::json doc;
  if (!name_.empty()) doc["name"] = name_;
  doc["nodes"] = num_nodes_;
  doc["cores"] = cores_;
  doc["core_adjacency"] = core_adjacency_;
  doc["links"] = nlohmann::json::array();
  for (const auto& l : links_)
    doc["links"].push_back({{"a", l.a}, {"b", l.b}, {"length_km", l.length_km}});
  return doc.dump(2);
}

} // namespace mcfsim
