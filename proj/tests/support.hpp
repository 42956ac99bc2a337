#ifndef COARSE_EP_TESTS_SUPPORT_HPP
#define COARSE_EP_TESTS_SUPPORT_HPP

// Independent brute-force helpers shared by the unit tests. None of these
// reuse the library's search code: they work from raw edge lists.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "coarse_ep/cycle.hpp"
#include "coarse_ep/generators.hpp"
#include "coarse_ep/graph.hpp"

namespace testing_support {

using coarse_ep::Cycle;
using coarse_ep::Edge;
using coarse_ep::Graph;
using coarse_ep::Vertex;

constexpr std::uint32_t kFar = std::numeric_limits<std::uint32_t>::max();

/// Distances from a source set by repeated edge relaxation.
inline std::vector<std::uint32_t> relax_distances(const Graph& g, const std::vector<Vertex>& from) {
  std::vector<std::uint32_t> dist(g.vertex_count(), kFar);
  for (Vertex v : from) dist[v] = 0;
  const auto edges = g.edges();
  for (bool changed = true; changed;) {
    changed = false;
    for (const Edge& e : edges) {
      if (dist[e.u] != kFar && dist[e.u] + 1 < dist[e.v]) dist[e.v] = dist[e.u] + 1, changed = true;
      if (dist[e.v] != kFar && dist[e.v] + 1 < dist[e.u]) dist[e.u] = dist[e.v] + 1, changed = true;
    }
  }
  return dist;
}

/// Every simple cycle, found as an edge subset in which all touched vertices
/// have degree 2 and which is connected. Only for graphs with few edges.
inline std::set<std::vector<Edge>> brute_force_cycles(const Graph& g) {
  const auto edges = g.edges();
  std::set<std::vector<Edge>> out;
  const std::size_t m = edges.size();
  if (m > 22) throw std::logic_error("brute_force_cycles: too many edges");
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::map<Vertex, int> deg;
    std::vector<Edge> chosen;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) {
        chosen.push_back(edges[i]);
        ++deg[edges[i].u];
        ++deg[edges[i].v];
      }
    }
    if (chosen.size() < 3) continue;
    bool two = std::all_of(deg.begin(), deg.end(), [](auto& p) { return p.second == 2; });
    if (!two || deg.size() != chosen.size()) continue;
    // Connected iff walking from one edge visits every chosen edge.
    std::set<Vertex> seen{chosen[0].u};
    for (bool grew = true; grew;) {
      grew = false;
      for (const Edge& e : chosen) {
        if (seen.count(e.u) != seen.count(e.v)) {
          seen.insert(e.u);
          seen.insert(e.v);
          grew = true;
        }
      }
    }
    if (seen.size() == deg.size()) out.insert(chosen);
  }
  return out;
}

/// Cycles sampled by deleting random vertex sets and asking for any cycle.
template <class FindCycle>
std::vector<Cycle> sample_cycles(const Graph& g, coarse_ep::Rng& rng, std::size_t tries,
                                 FindCycle find) {
  std::set<Cycle> found;
  for (std::size_t t = 0; t < tries; ++t) {
    coarse_ep::VertexSet s;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (t > 0 && rng.coin(1, 4)) s.insert(v);
    }
    if (auto c = find(g, s)) found.insert(*c);
  }
  return {found.begin(), found.end()};
}

}  // namespace testing_support

#endif  // COARSE_EP_TESTS_SUPPORT_HPP
