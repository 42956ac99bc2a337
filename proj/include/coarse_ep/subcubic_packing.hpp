#ifndef COARSE_EP_SUBCUBIC_PACKING_HPP
#define COARSE_EP_SUBCUBIC_PACKING_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "coarse_ep/cycle.hpp"
#include "coarse_ep/metric.hpp"

namespace coarse_ep {

/// s(k): 2 for k = 1, otherwise ceil(4k(log2 k + log2 log2 k + 4)).
inline std::uint64_t s_bound(std::uint64_t k) {
  detail::require(k >= 1, "s(k) needs k >= 1");
  if (k == 1) return 2;
  const long double kk = static_cast<long double>(k);
  const long double lg = std::log2(kk);
  const long double value = 4 * kk * (lg + std::log2(lg) + 4);
  const long double nearest = std::round(value);
  // Exact integers such as s(2) = 40 must not be pushed up by rounding noise.
  if (std::fabs(value - nearest) < 1e-9L) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(value));
}

inline std::size_t branch_vertex_count(const Graph& g) {
  std::size_t count = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) count += g.degree(v) == 3;
  return count;
}

/// True iff every vertex has degree 2 or 3, ignoring isolated vertices (which
/// stand for ids not used by the subgraph).
inline bool is_subcubic_core(const Graph& g) {
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const std::size_t deg = g.degree(v);
    if (deg != 0 && deg != 2 && deg != 3) return false;
  }
  return true;
}

namespace detail {

// Repeatedly strips vertices of degree one; cycles are unaffected.
inline void prune_tails(std::vector<char>& alive, const Graph& g) {
  std::vector<std::size_t> deg(g.vertex_count(), 0);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!alive[v]) continue;
    for (Vertex w : g.neighbors(v)) deg[v] += alive[w] ? 1 : 0;
    if (deg[v] <= 1) queue.push_back(v);
  }
  while (!queue.empty()) {
    Vertex v = queue.back();
    queue.pop_back();
    if (!alive[v]) continue;
    alive[v] = 0;
    for (Vertex w : g.neighbors(v)) {
      if (alive[w] && --deg[w] == 1) queue.push_back(w);
    }
  }
}

// A shortest cycle among alive vertices (ties: smallest canonical form).
inline std::optional<Cycle> shortest_cycle(const Graph& g, const std::vector<char>& alive) {
  const std::size_t n = g.vertex_count();
  std::optional<Cycle> best;
  std::vector<std::uint32_t> dist(n);
  std::vector<Vertex> parent(n);
  std::vector<char> seen(n);
  for (Vertex s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    std::fill(seen.begin(), seen.end(), 0);
    std::deque<Vertex> queue{s};
    seen[s] = 1;
    dist[s] = 0;
    parent[s] = s;
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      if (best && 2 * dist[u] + 1 > best->length()) break;
      for (Vertex w : g.neighbors(u)) {
        if (!alive[w] || w == parent[u]) continue;
        if (!seen[w]) {
          seen[w] = 1;
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
          continue;
        }
        const std::size_t len = dist[u] + dist[w] + 1;
        if (best && len > best->length()) continue;
        std::vector<Vertex> walk;
        for (Vertex x = u; x != s; x = parent[x]) walk.push_back(x);
        walk.push_back(s);
        std::reverse(walk.begin(), walk.end());
        std::vector<Vertex> back;
        for (Vertex x = w; x != s; x = parent[x]) back.push_back(x);
        walk.insert(walk.end(), back.begin(), back.end());
        std::vector<Vertex> sorted = walk;
        std::sort(sorted.begin(), sorted.end());
        if (walk.size() < 3 || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
          continue;
        }
        Cycle c(std::move(walk));
        if (!best || c.length() < best->length() ||
            (c.length() == best->length() && c < *best)) {
          best = std::move(c);
        }
      }
    }
  }
  return best;
}

inline std::size_t alive_rank(const Graph& g, const std::vector<char>& alive) {
  return cycle_rank(g.induced(alive));
}

// Cycles through v among alive vertices, shortest first.
inline std::vector<Cycle> cycles_through(const Graph& g, const std::vector<char>& alive, Vertex v,
                                         std::size_t cap) {
  std::vector<Cycle> out;
  std::vector<char> on_path(g.vertex_count(), 0);
  std::vector<Vertex> path{v};
  std::vector<std::size_t> cursor(g.vertex_count(), 0);
  on_path[v] = 1;
  while (!path.empty() && out.size() < cap) {
    const Vertex u = path.back();
    auto nbrs = g.neighbors(u);
    if (cursor[u] == nbrs.size()) {
      on_path[u] = 0;
      cursor[u] = 0;
      path.pop_back();
      continue;
    }
    const Vertex w = nbrs[cursor[u]++];
    if (!alive[w]) continue;
    if (w == v && path.size() >= 3 && path[1] < path.back()) {
      out.emplace_back(path);
    } else if (!on_path[w]) {
      on_path[w] = 1;
      path.push_back(w);
    }
  }
  std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
    return a.length() != b.length() ? a.length() < b.length() : a < b;
  });
  return out;
}

class DisjointCycleSearch {
 public:
  DisjointCycleSearch(const Graph& g, std::size_t budget) : g_(g), budget_(budget) {}

  std::optional<std::vector<Cycle>> run(std::vector<char> alive, std::size_t k) {
    std::vector<Cycle> chosen;
    if (search(std::move(alive), k, chosen)) return chosen;
    return std::nullopt;
  }

  bool exhausted() const { return budget_ == 0; }

 private:
  bool search(std::vector<char> alive, std::size_t k, std::vector<Cycle>& chosen) {
    if (k == 0) return true;
    if (budget_ == 0) return false;
    --budget_;
    prune_tails(alive, g_);
    if (alive_rank(g_, alive) < k) return false;
    Vertex v = 0;
    while (!alive[v]) ++v;
    for (const Cycle& c : cycles_through(g_, alive, v, 4096)) {
      std::vector<char> rest = alive;
      for (Vertex x : c.vertices()) rest[x] = 0;
      chosen.push_back(c);
      if (search(std::move(rest), k - 1, chosen)) return true;
      chosen.pop_back();
    }
    alive[v] = 0;
    return search(std::move(alive), k, chosen);
  }

  const Graph& g_;
  std::size_t budget_;
};

}  // namespace detail

/// Up to k vertex-disjoint cycles, or nothing if none were found.
///
/// Shortest-cycle-first greedy; when that stalls, an exhaustive search
/// branching on the smallest remaining vertex (drop it, or take one of the
/// cycles through it), capped at `node_budget` search nodes.
inline std::optional<std::vector<Cycle>> try_find_disjoint_cycles(const Graph& g, std::size_t k,
                                                                  std::size_t node_budget = 200000) {
  std::vector<char> alive(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) alive[v] = g.degree(v) > 0;
  if (k == 0) return std::vector<Cycle>{};

  std::vector<Cycle> greedy;
  std::vector<char> rest = alive;
  while (greedy.size() < k) {
    detail::prune_tails(rest, g);
    auto c = detail::shortest_cycle(g, rest);
    if (!c) break;
    for (Vertex x : c->vertices()) rest[x] = 0;
    greedy.push_back(std::move(*c));
  }
  if (greedy.size() == k) return greedy;

  detail::DisjointCycleSearch search(g, node_budget);
  return search.run(alive, k);
}

/// k pairwise vertex-disjoint cycles of a graph whose vertices have degree 2
/// or 3 (isolated vertices are ignored).
///
/// Any input works if the search succeeds. On failure the error is an
/// InvariantError when the graph has at least s(k) branch vertices (the
/// cycles must exist), otherwise a PreconditionError.
inline std::vector<Cycle> find_disjoint_cycles(const Graph& g, std::size_t k) {
  detail::require(k >= 1, "find_disjoint_cycles needs k >= 1");
  detail::require(is_subcubic_core(g), "find_disjoint_cycles needs all degrees in {2,3}");
  auto found = try_find_disjoint_cycles(g, k);
  if (!found) {
    const std::size_t branch = branch_vertex_count(g);
    const std::string why = std::to_string(k) + " disjoint cycles not found with " +
                            std::to_string(branch) + " branch vertices (s(k) = " +
                            std::to_string(s_bound(k)) + ")";
    detail::ensure(branch < s_bound(k), why);
    throw PreconditionError(why);
  }
  for (std::size_t i = 0; i < found->size(); ++i) {
    detail::ensure((*found)[i].is_valid_in(g), "disjoint-cycle search produced an invalid cycle");
    for (std::size_t j = 0; j < i; ++j) {
      detail::ensure(!(*found)[i].vertex_set().intersects((*found)[j].vertex_set()),
                     "disjoint-cycle search produced overlapping cycles");
    }
  }
  return *found;
}

}  // namespace coarse_ep

#endif  // COARSE_EP_SUBCUBIC_PACKING_HPP
