#ifndef COARSE_EP_METRIC_HPP
#define COARSE_EP_METRIC_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "coarse_ep/cycle.hpp"
#include "coarse_ep/graph.hpp"

namespace coarse_ep {

/// Graph distance: a hop count, or infinity when no path exists.
class Distance {
 public:
  static Distance infinite() { return Distance(); }
  static Distance finite(std::uint64_t hops) { return Distance(hops); }

  bool is_finite() const { return hops_.has_value(); }
  std::uint64_t value() const {
    detail::require(hops_.has_value(), "infinite distance has no value");
    return *hops_;
  }
  /// True iff the distance is strictly greater than `bound` (infinity always is).
  bool exceeds(std::uint64_t bound) const { return !hops_ || *hops_ > bound; }

  std::string to_string() const { return hops_ ? std::to_string(*hops_) : "inf"; }

  friend bool operator==(const Distance&, const Distance&) = default;

 private:
  Distance() = default;
  explicit Distance(std::uint64_t hops) : hops_(hops) {}
  std::optional<std::uint64_t> hops_;
};

using DistanceMap = std::vector<std::optional<std::uint32_t>>;

/// Multi-source BFS. Sources are seeded in ascending order and neighbours are
/// expanded in ascending order. With `limit`, vertices farther than `limit`
/// stay unreached.
inline DistanceMap bfs_distances(const Graph& g, const VertexSet& sources,
                                 std::optional<std::uint32_t> limit = std::nullopt) {
  DistanceMap dist(g.vertex_count());
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    detail::require(g.contains(s), "BFS source " + std::to_string(s) + " outside graph");
    dist[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    if (limit && *dist[u] >= *limit) continue;
    for (Vertex w : g.neighbors(u)) {
      if (!dist[w]) {
        dist[w] = *dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

/// dist_G(X, Y) for nonempty X and Y.
inline Distance distance(const Graph& g, const VertexSet& from, const VertexSet& to) {
  detail::require(!from.empty() && !to.empty(), "distance needs nonempty vertex sets");
  DistanceMap dist = bfs_distances(g, from);
  std::optional<std::uint32_t> best;
  for (Vertex v : to) {
    detail::require(g.contains(v), "vertex " + std::to_string(v) + " outside graph");
    if (dist[v] && (!best || *dist[v] < *best)) best = dist[v];
  }
  return best ? Distance::finite(*best) : Distance::infinite();
}

/// B_G(X, r): vertices within distance r of some vertex of X.
inline VertexSet ball(const Graph& g, const VertexSet& centers, std::uint32_t radius) {
  DistanceMap dist = bfs_distances(g, centers, radius);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < dist.size(); ++v) {
    if (dist[v]) out.push_back(v);
  }
  return VertexSet(std::move(out));
}

/// Component id per vertex, numbered in order of smallest member.
inline std::vector<std::uint32_t> component_labels(const Graph& g) {
  constexpr std::uint32_t kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> label(g.vertex_count(), kUnset);
  std::uint32_t next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(u)) {
        if (label[w] == kUnset) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

inline std::size_t component_count(const Graph& g) {
  std::uint32_t most = 0;
  for (std::uint32_t label : component_labels(g)) most = std::max(most, label + 1);
  return most;
}

/// |E| - |V| + #components. Zero iff forest; at most one iff unicyclic.
inline std::size_t cycle_rank(const Graph& g) {
  return g.edge_count() + component_count(g) - g.vertex_count();
}

inline bool is_forest(const Graph& g) { return cycle_rank(g) == 0; }

/// Some cycle of G - S, or nothing when G - S is a forest.
///
/// Iterative DFS from the smallest unvisited vertex with neighbours in
/// ascending order; the first back edge found closes the returned cycle.
inline std::optional<Cycle> find_cycle_avoiding(const Graph& g, const VertexSet& avoid) {
  const std::size_t n = g.vertex_count();
  std::vector<char> blocked = avoid.mask(n);
  std::vector<char> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<Vertex> parent(n, 0);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<Vertex> stack;
  for (Vertex root = 0; root < n; ++root) {
    if (blocked[root] || state[root]) continue;
    state[root] = 1;
    parent[root] = root;
    stack.push_back(root);
    while (!stack.empty()) {
      Vertex u = stack.back();
      auto nbrs = g.neighbors(u);
      if (cursor[u] == nbrs.size()) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      Vertex w = nbrs[cursor[u]++];
      if (blocked[w]) continue;
      if (state[w] == 0) {
        state[w] = 1;
        parent[w] = u;
        stack.push_back(w);
      } else if (state[w] == 1 && w != parent[u]) {
        std::vector<Vertex> cycle{u};
        for (Vertex x = u; x != w;) {
          x = parent[x];
          cycle.push_back(x);
        }
        return Cycle(std::move(cycle));
      }
    }
  }
  return std::nullopt;
}

inline std::optional<Cycle> find_cycle(const Graph& g) { return find_cycle_avoiding(g, {}); }

/// BFS layers from a source set together with the minimum-id parent choice:
/// every reached non-source vertex points at its smallest neighbour one layer
/// closer to the sources.
struct ShortestPathForest {
  DistanceMap depth;
  std::vector<std::optional<Vertex>> parent;

  /// Vertex sequence from `v` down to a source, following parents.
  std::vector<Vertex> path_to_source(Vertex v) const {
    detail::require(v < depth.size() && depth[v].has_value(),
                    "vertex " + std::to_string(v) + " not reached");
    std::vector<Vertex> path{v};
    while (parent[path.back()]) path.push_back(*parent[path.back()]);
    return path;
  }
};

inline ShortestPathForest shortest_path_forest(const Graph& g, const VertexSet& sources,
                                               std::optional<std::uint32_t> limit = std::nullopt) {
  ShortestPathForest out;
  out.depth = bfs_distances(g, sources, limit);
  out.parent.assign(g.vertex_count(), std::nullopt);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!out.depth[v] || *out.depth[v] == 0) continue;
    for (Vertex w : g.neighbors(v)) {
      if (out.depth[w] && *out.depth[w] + 1 == *out.depth[v]) {
        out.parent[v] = w;
        break;
      }
    }
  }
  return out;
}

}  // namespace coarse_ep

#endif  // COARSE_EP_METRIC_HPP
