#ifndef COARSE_EP_GRAPH_HPP
#define COARSE_EP_GRAPH_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coarse_ep/error.hpp"

namespace coarse_ep {

using Vertex = std::uint32_t;

/// Undirected edge stored with `u < v`.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  Vertex other(Vertex w) const { return w == u ? v : u; }
  bool has(Vertex w) const { return w == u || w == v; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

inline std::string to_string(const Edge& e) {
  return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

/// Sorted, duplicate-free set of vertex ids.
class VertexSet {
 public:
  using const_iterator = std::vector<Vertex>::const_iterator;

  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> ids) : VertexSet(std::vector<Vertex>(ids)) {}
  explicit VertexSet(std::vector<Vertex> ids) : members_(std::move(ids)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  /// Builds the set of ids `v` with `mask[v]` set.
  static VertexSet from_mask(const std::vector<char>& mask) {
    VertexSet out;
    for (Vertex v = 0; v < mask.size(); ++v) {
      if (mask[v]) out.members_.push_back(v);
    }
    return out;
  }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }
  const std::vector<Vertex>& members() const { return members_; }
  Vertex min() const { return members_.front(); }

  bool contains(Vertex v) const { return std::binary_search(members_.begin(), members_.end(), v); }

  void insert(Vertex v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || *it != v) members_.insert(it, v);
  }

  void insert_all(const VertexSet& other) { *this = unite(*this, other); }

  std::vector<char> mask(std::size_t n) const {
    std::vector<char> out(n, 0);
    for (Vertex v : members_) {
      if (v < n) out[v] = 1;
    }
    return out;
  }

  bool is_subset_of(const VertexSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
  }

  bool intersects(const VertexSet& other) const {
    auto a = members_.begin();
    auto b = other.members_.begin();
    while (a != members_.end() && b != other.members_.end()) {
      if (*a == *b) return true;
      if (*a < *b) {
        ++a;
      } else {
        ++b;
      }
    }
    return false;
  }

  static VertexSet unite(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.members_));
    return out;
  }

  static VertexSet intersect(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out.members_));
    return out;
  }

  static VertexSet subtract(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.members_));
    return out;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> members_;
};

/// Finite simple undirected graph on vertex ids 0..n-1.
///
/// Adjacency lists are strictly increasing and symmetric. Instances are
/// immutable after construction. Subgraph operations keep the id space: a
/// removed vertex simply becomes isolated, so sets computed in a subgraph are
/// valid in the host without translation.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adjacency_(n) {}

  /// Trusted construction from normalized edges; duplicates are collapsed.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Graph g(n);
    for (const Edge& e : edges) {
      g.adjacency_[e.u].push_back(e.v);
      g.adjacency_[e.v].push_back(e.u);
    }
    for (auto& list : g.adjacency_) std::sort(list.begin(), list.end());
    g.edge_count_ = edges.size();
    return g;
  }

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  bool contains(Vertex v) const { return v < adjacency_.size(); }

  bool has_edge(Vertex a, Vertex b) const {
    if (a >= adjacency_.size() || b >= adjacency_.size()) return false;
    const auto& list = adjacency_[a];
    return std::binary_search(list.begin(), list.end(), b);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < adjacency_.size(); ++u) {
      for (Vertex v : adjacency_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  /// Subgraph induced by `keep` (same id space).
  Graph induced(const std::vector<char>& keep) const {
    std::vector<Edge> kept;
    for (Vertex u = 0; u < adjacency_.size(); ++u) {
      if (!keep[u]) continue;
      for (Vertex v : adjacency_[u]) {
        if (u < v && keep[v]) kept.emplace_back(u, v);
      }
    }
    return from_edges(vertex_count(), std::move(kept));
  }

  Graph induced(const VertexSet& keep) const { return induced(keep.mask(vertex_count())); }

  /// G - S.
  Graph without(const VertexSet& removed) const {
    std::vector<char> keep(vertex_count(), 1);
    for (Vertex v : removed) {
      if (v < keep.size()) keep[v] = 0;
    }
    return induced(keep);
  }

  /// G minus a set of edges.
  Graph without_edges(std::span<const Edge> removed) const {
    std::vector<Edge> all = edges();
    std::vector<Edge> gone(removed.begin(), removed.end());
    std::sort(gone.begin(), gone.end());
    std::vector<Edge> kept;
    std::set_difference(all.begin(), all.end(), gone.begin(), gone.end(),
                        std::back_inserter(kept));
    return from_edges(vertex_count(), std::move(kept));
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Validating constructor for user-supplied edge lists.
inline Graph build_graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) {
      throw InputError("edge {" + std::to_string(a) + "," + std::to_string(b) +
                       "} has an endpoint outside [0," + std::to_string(n) + ")");
    }
    if (a == b) throw InputError("self-loop at vertex " + std::to_string(a));
    edges.emplace_back(a, b);
  }
  return Graph::from_edges(n, std::move(edges));
}

inline Graph build_graph(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> pairs) {
  std::vector<std::pair<Vertex, Vertex>> list(pairs);
  return build_graph(n, std::span<const std::pair<Vertex, Vertex>>(list));
}

}  // namespace coarse_ep

#endif  // COARSE_EP_GRAPH_HPP
