#ifndef COARSE_EP_ORACLE_HPP
#define COARSE_EP_ORACLE_HPP

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "coarse_ep/cycle.hpp"
#include "coarse_ep/metric.hpp"

namespace coarse_ep {

/// Exhaustive searches refuse instances beyond these sizes. Vertex sets are
/// handled as 64-bit masks, so max_vertices can never exceed 64.
struct OracleLimits {
  std::size_t max_vertices = 18;
  std::size_t max_cycles = 5000;

  /// Defaults, overridden by COARSE_EP_LIMITS="max_vertices,max_cycles" when set.
  static OracleLimits from_env() {
    OracleLimits limits;
    const char* raw = std::getenv("COARSE_EP_LIMITS");
    if (raw == nullptr || *raw == '\0') return limits;
    const std::string text(raw);
    const auto comma = text.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      limits.max_vertices = std::stoul(text.substr(0, comma));
      limits.max_cycles = std::stoul(text.substr(comma + 1));
    } catch (const std::exception&) {
      throw InputError("COARSE_EP_LIMITS must look like 'max_vertices,max_cycles', got '" +
                       text + "'");
    }
    if (limits.max_vertices > 64) throw InputError("COARSE_EP_LIMITS: max_vertices is capped at 64");
    return limits;
  }
};

namespace detail {

inline void check_vertex_limit(const Graph& g, const OracleLimits& limits) {
  if (g.vertex_count() > limits.max_vertices || g.vertex_count() > 64) {
    throw OracleLimitError("oracle refuses graphs with " + std::to_string(g.vertex_count()) +
                           " vertices (limit " + std::to_string(limits.max_vertices) + ")");
  }
}

inline std::uint64_t mask_of(std::span<const Vertex> vs) {
  std::uint64_t m = 0;
  for (Vertex v : vs) m |= std::uint64_t{1} << v;
  return m;
}

// Per-vertex ball masks B(v, radius).
inline std::vector<std::uint64_t> ball_masks(const Graph& g, std::uint32_t radius) {
  std::vector<std::uint64_t> out(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    DistanceMap dist = bfs_distances(g, {v}, radius);
    for (Vertex w = 0; w < g.vertex_count(); ++w) {
      if (dist[w]) out[v] |= std::uint64_t{1} << w;
    }
  }
  return out;
}

// True iff G minus the vertices in `removed` has no cycle.
inline bool forest_after_removal(const Graph& g, std::uint64_t removed) {
  std::vector<Vertex> root(g.vertex_count());
  for (Vertex v = 0; v < root.size(); ++v) root[v] = v;
  auto find = [&](Vertex v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (const Edge& e : g.edges()) {
    if ((removed >> e.u & 1) || (removed >> e.v & 1)) continue;
    Vertex a = find(e.u);
    Vertex b = find(e.v);
    if (a == b) return false;
    root[a] = b;
  }
  return true;
}

class MaxIndependentSet {
 public:
  explicit MaxIndependentSet(std::vector<std::vector<std::uint64_t>> adjacency)
      : adj_(std::move(adjacency)), words_(adj_.empty() ? 0 : adj_.front().size()) {}

  std::size_t solve() {
    std::vector<std::uint64_t> all(words_, 0);
    for (std::size_t v = 0; v < adj_.size(); ++v) all[v / 64] |= std::uint64_t{1} << (v % 64);
    best_ = 0;
    search(all, 0);
    return best_;
  }

 private:
  std::size_t count(const std::vector<std::uint64_t>& s) const {
    std::size_t c = 0;
    for (auto w : s) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  void search(const std::vector<std::uint64_t>& rest, std::size_t taken) {
    const std::size_t left = count(rest);
    if (left == 0) {
      best_ = std::max(best_, taken);
      return;
    }
    if (taken + left <= best_) return;
    // Some vertex of N[v] is in every maximal independent set; branch on those
    // for the v of smallest degree inside `rest`.
    std::size_t pick = 0;
    std::size_t pick_degree = static_cast<std::size_t>(-1);
    for (std::size_t w = 0; w < words_; ++w) {
      for (std::uint64_t bits = rest[w]; bits; bits &= bits - 1) {
        const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        std::size_t deg = 0;
        for (std::size_t x = 0; x < words_; ++x) {
          deg += static_cast<std::size_t>(std::popcount(adj_[v][x] & rest[x]));
        }
        if (deg < pick_degree) {
          pick = v;
          pick_degree = deg;
        }
      }
    }
    std::vector<std::uint64_t> closed(words_);
    for (std::size_t x = 0; x < words_; ++x) closed[x] = adj_[pick][x] & rest[x];
    closed[pick / 64] |= std::uint64_t{1} << (pick % 64);
    std::vector<std::uint64_t> next(words_);
    for (std::size_t w = 0; w < words_; ++w) {
      for (std::uint64_t bits = closed[w]; bits; bits &= bits - 1) {
        const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        for (std::size_t x = 0; x < words_; ++x) {
          next[x] = rest[x] & ~adj_[v][x];
        }
        next[v / 64] &= ~(std::uint64_t{1} << (v % 64));
        search(next, taken + 1);
      }
    }
  }

  std::vector<std::vector<std::uint64_t>> adj_;
  std::size_t words_;
  std::size_t best_ = 0;
};

}  // namespace detail

/// All simple cycles of G in canonical form, sorted.
///
/// Each cycle is found once from its minimum vertex s by a DFS restricted to
/// vertices above s, and kept in the orientation whose second vertex is
/// smaller than its last.
inline std::vector<Cycle> enumerate_cycles(const Graph& g, const OracleLimits& limits = {}) {
  detail::check_vertex_limit(g, limits);
  std::vector<Cycle> out;
  const std::size_t n = g.vertex_count();
  std::vector<char> on_path(n, 0);
  std::vector<Vertex> path;
  std::vector<std::size_t> cursor(n, 0);
  for (Vertex s = 0; s < n; ++s) {
    path.assign(1, s);
    on_path[s] = 1;
    cursor[s] = 0;
    while (!path.empty()) {
      const Vertex u = path.back();
      auto nbrs = g.neighbors(u);
      if (cursor[u] == nbrs.size()) {
        on_path[u] = 0;
        path.pop_back();
        continue;
      }
      const Vertex w = nbrs[cursor[u]++];
      if (w == s && path.size() >= 3 && path[1] < path.back()) {
        if (out.size() == limits.max_cycles) {
          throw OracleLimitError("oracle refuses graphs with more than " +
                                 std::to_string(limits.max_cycles) + " cycles");
        }
        out.emplace_back(path);
      } else if (w > s && !on_path[w]) {
        on_path[w] = 1;
        cursor[w] = 0;
        path.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Largest number of cycles pairwise at distance greater than d.
///
/// Only chordless cycles are considered: a cycle with a chord contains a
/// shorter cycle on a subset of its vertices, which can replace it in any
/// packing. The packing is a maximum independent set of the conflict graph
/// (distance at most d), found by exact branch and bound.
inline std::size_t max_d_packing(const Graph& g, std::uint32_t d, const OracleLimits& limits = {}) {
  const std::vector<Cycle> all = enumerate_cycles(g, limits);
  std::vector<std::uint64_t> vmask;
  for (const Cycle& c : all) {
    if (c.length() == 3) {
      vmask.push_back(detail::mask_of(c.vertices()));
      continue;
    }
    bool chordless = true;
    for (std::size_t i = 0; i < c.length() && chordless; ++i) {
      for (std::size_t j = i + 2; j < c.length(); ++j) {
        if (i == 0 && j + 1 == c.length()) continue;
        if (g.has_edge(c.vertices()[i], c.vertices()[j])) {
          chordless = false;
          break;
        }
      }
    }
    if (chordless) vmask.push_back(detail::mask_of(c.vertices()));
  }
  if (vmask.empty()) return 0;

  const auto balls = detail::ball_masks(g, d);
  std::vector<std::uint64_t> reach(vmask.size(), 0);
  for (std::size_t i = 0; i < vmask.size(); ++i) {
    for (std::uint64_t bits = vmask[i]; bits; bits &= bits - 1) {
      reach[i] |= balls[static_cast<std::size_t>(std::countr_zero(bits))];
    }
  }
  const std::size_t words = (vmask.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> adj(vmask.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < vmask.size(); ++i) {
    for (std::size_t j = i + 1; j < vmask.size(); ++j) {
      if (reach[i] & vmask[j]) {
        adj[i][j / 64] |= std::uint64_t{1} << (j % 64);
        adj[j][i / 64] |= std::uint64_t{1} << (i % 64);
      }
    }
  }
  return detail::MaxIndependentSet(std::move(adj)).solve();
}

/// Smallest |X| such that G - B(X, radius) is a forest, by trying every
/// subset in order of increasing size.
inline std::size_t min_ball_hitting(const Graph& g, std::uint32_t radius,
                                    const OracleLimits& limits = {}) {
  detail::check_vertex_limit(g, limits);
  if (detail::forest_after_removal(g, 0)) return 0;
  const auto balls = detail::ball_masks(g, radius);
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> pick;
  for (std::size_t size = 1; size <= n; ++size) {
    pick.resize(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      std::uint64_t removed = 0;
      for (std::size_t v : pick) removed |= balls[v];
      if (detail::forest_after_removal(g, removed)) return size;
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  detail::ensure(false, "removing every ball leaves a cycle");
  return n;
}

}  // namespace coarse_ep

#endif  // COARSE_EP_ORACLE_HPP
