#ifndef COARSE_EP_GENERATORS_HPP
#define COARSE_EP_GENERATORS_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "coarse_ep/graph.hpp"

namespace coarse_ep {

/// Portable pseudo-random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded draws use rejection sampling on the raw 64-bit output
/// (the standard distributions are implementation-defined and would break
/// cross-platform reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    detail::require(bound > 0, "Rng::below needs a positive bound");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  bool coin(std::uint64_t numerator, std::uint64_t denominator) {
    return below(denominator) < numerator;
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// rows x cols grid graph; vertex (i, j) has id i * cols + j.
inline Graph grid_graph(std::size_t rows, std::size_t cols) {
  detail::require(rows > 0 && cols > 0, "grid dimensions must be positive");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const auto v = static_cast<Vertex>(i * cols + j);
      if (j + 1 < cols) edges.emplace_back(v, v + 1);
      if (i + 1 < rows) edges.emplace_back(v, static_cast<Vertex>(v + cols));
    }
  }
  return Graph::from_edges(rows * cols, std::move(edges));
}

/// Uniform random graph with n vertices and exactly m edges.
inline Graph random_gnm(std::size_t n, std::size_t m, std::uint64_t seed) {
  detail::require(n > 0, "random-gnm needs n > 0");
  detail::require(m <= n * (n - 1) / 2, "random-gnm: m exceeds n(n-1)/2");
  Rng rng(seed);
  std::set<Edge> chosen;
  while (chosen.size() < m) {
    auto a = static_cast<Vertex>(rng.below(n));
    auto b = static_cast<Vertex>(rng.below(n));
    if (a != b) chosen.emplace(a, b);
  }
  return Graph::from_edges(n, std::vector<Edge>(chosen.begin(), chosen.end()));
}

/// k vertex-disjoint cycles of length L, each its own component, so any two
/// are at infinite distance (in particular farther apart than `gap`).
inline Graph disjoint_cycles(std::size_t k, std::size_t length, std::size_t gap) {
  detail::require(k > 0, "disjoint-cycles needs k > 0");
  detail::require(length >= 3, "disjoint-cycles needs length >= 3");
  (void)gap;
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < k; ++c) {
    const auto base = static_cast<Vertex>(c * length);
    for (std::size_t i = 0; i < length; ++i) {
      edges.emplace_back(base + static_cast<Vertex>(i),
                         base + static_cast<Vertex>((i + 1) % length));
    }
  }
  return Graph::from_edges(k * length, std::move(edges));
}

/// k cycles of length L strung on a path: consecutive cycles are joined by a
/// path with gap + 1 edges, so cycle distances exceed `gap`.
inline Graph cycle_chain(std::size_t k, std::size_t length, std::size_t gap) {
  detail::require(k > 0 && length >= 3, "cycle-chain needs k > 0 and length >= 3");
  std::vector<Edge> edges;
  Vertex next = 0;
  std::vector<Vertex> anchors;
  for (std::size_t c = 0; c < k; ++c) {
    const Vertex base = next;
    for (std::size_t i = 0; i < length; ++i) {
      edges.emplace_back(base + static_cast<Vertex>(i),
                         base + static_cast<Vertex>((i + 1) % length));
    }
    next += static_cast<Vertex>(length);
    if (c > 0) {
      Vertex prev = anchors.back();
      for (std::size_t i = 0; i < gap; ++i) {
        edges.emplace_back(prev, next);
        prev = next++;
      }
      edges.emplace_back(prev, base);
    }
    anchors.push_back(base + static_cast<Vertex>(length / 2));
  }
  return Graph::from_edges(next, std::move(edges));
}

/// Replaces every edge of `base` by a path with `parts` edges.
inline Graph subdivide(const Graph& base, std::size_t parts) {
  detail::require(parts >= 1, "subdivision needs at least one part per edge");
  std::vector<Edge> edges;
  auto next = static_cast<Vertex>(base.vertex_count());
  for (const Edge& e : base.edges()) {
    Vertex prev = e.u;
    for (std::size_t i = 1; i < parts; ++i) {
      edges.emplace_back(prev, next);
      prev = next++;
    }
    edges.emplace_back(prev, e.v);
  }
  return Graph::from_edges(next, std::move(edges));
}

/// Random G(n, m) graph with every edge subdivided into `parts` edges.
inline Graph random_subdivision(std::size_t n, std::size_t m, std::size_t parts,
                                std::uint64_t seed) {
  return subdivide(random_gnm(n, m, seed), parts);
}

/// Random graph whose vertices all have degree 2 or 3.
///
/// Pairs the 3 * branch half-edges of `branch` (even) cubic vertices
/// uniformly at random, subdivides loops twice and repeated pairs once so the
/// result is simple, then spreads `extra` further degree-2 vertices over the
/// edges.
inline Graph random_subcubic(std::size_t branch, std::size_t extra, std::uint64_t seed) {
  detail::require(branch >= 2 && branch % 2 == 0, "subcubic needs an even branch count >= 2");
  Rng rng(seed);
  std::vector<Vertex> stubs;
  for (Vertex v = 0; v < branch; ++v) {
    for (int i = 0; i < 3; ++i) stubs.push_back(v);
  }
  rng.shuffle(stubs);
  auto next = static_cast<Vertex>(branch);
  std::vector<std::pair<Vertex, Vertex>> raw;
  for (std::size_t i = 0; i < stubs.size(); i += 2) raw.emplace_back(stubs[i], stubs[i + 1]);

  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::vector<std::size_t> parts(raw.size(), 1);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [a, b] = raw[i];
    if (a == b) {
      parts[i] = 3;
    } else if (!seen.emplace(a, b).second) {
      parts[i] = 2;
    }
  }
  for (std::size_t i = 0; i < extra; ++i) ++parts[rng.below(raw.size())];
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Vertex prev = raw[i].first;
    for (std::size_t j = 1; j < parts[i]; ++j) {
      edges.emplace_back(prev, next);
      prev = next++;
    }
    edges.emplace_back(prev, raw[i].second);
  }
  return Graph::from_edges(next, std::move(edges));
}

}  // namespace coarse_ep

#endif  // COARSE_EP_GENERATORS_HPP
