#ifndef COARSE_EP_CYCLE_TOOLS_HPP
#define COARSE_EP_CYCLE_TOOLS_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "coarse_ep/cycle.hpp"
#include "coarse_ep/metric.hpp"

namespace coarse_ep {

/// True iff every two cycles are at distance greater than d.
inline bool is_d_packing(const Graph& g, std::span<const Cycle> cycles, std::uint32_t d) {
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    detail::require(cycles[i].is_valid_in(g),
                    "cycle " + std::to_string(i) + " (" + cycles[i].to_string() +
                        ") is not a cycle of the graph");
  }
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    DistanceMap dist = bfs_distances(g, cycles[i].vertex_set(), d);
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      for (Vertex v : cycles[j].vertices()) {
        if (dist[v]) return false;
      }
    }
  }
  return true;
}

/// True iff G[B(V(C), r)] contains at most one cycle.
inline bool is_r_unicyclic(const Graph& g, const Cycle& c, std::uint32_t r) {
  detail::require(c.is_valid_in(g), "cycle " + c.to_string() + " is not a cycle of the graph");
  return cycle_rank(g.induced(ball(g, c.vertex_set(), r))) <= 1;
}

struct RefinementOutcome {
  enum class Tag { Unicyclic, Short };
  Tag tag;
  Cycle cycle;
  /// Loop iterations performed before the outcome was produced.
  std::size_t iterations = 0;
};

namespace detail {

inline bool edges_subset(const std::vector<Edge>& small, const std::vector<Edge>& large) {
  return std::includes(large.begin(), large.end(), small.begin(), small.end());
}

inline void check_refinement(const Graph& g, const Cycle& c, std::uint32_t r,
                             const RefinementOutcome& out) {
  ensure(out.cycle.is_valid_in(g), "refinement returned an invalid cycle");
  const VertexSet home = c.vertex_set();
  if (out.tag == RefinementOutcome::Tag::Unicyclic) {
    ensure(is_r_unicyclic(g, out.cycle, r), "unicyclic outcome is not r-unicyclic");
    ensure(out.cycle.vertex_set().is_subset_of(ball(g, home, 2 * r)),
           "unicyclic outcome leaves B(V(C), 2r)");
  } else {
    ensure(out.cycle.length() <= 6 * static_cast<std::size_t>(r) + 2,
           "short outcome longer than 6r+2");
    ensure(out.cycle.vertex_set().is_subset_of(ball(g, home, 3 * r)),
           "short outcome leaves B(V(C), 3r)");
  }
}

}  // namespace detail

/// Turns any cycle C into either an r-unicyclic cycle within B(V(C), 2r) or a
/// cycle of length at most 6r+2 within B(V(C), 3r).
///
/// The current cycle C_i is kept as a vertex sequence cyc whose first lenP+1
/// entries are the path P_i (from cyc[0] to cyc[lenP]); the remaining entries
/// are the interior of Q_i, which runs from cyc[lenP] back to cyc[0].
inline RefinementOutcome short_or_unicyclic(const Graph& g, const Cycle& c, std::uint32_t r) {
  detail::require(c.is_valid_in(g), "cycle " + c.to_string() + " is not a cycle of the graph");
  using Tag = RefinementOutcome::Tag;
  const std::vector<Edge> c_edges = c.edges();
  const std::size_t max_p = 4 * static_cast<std::size_t>(r) + 1;

  // P_0 is the smallest edge {a, b} of C.
  std::vector<Vertex> cyc(c.vertices().begin(), c.vertices().end());
  {
    const Edge first = c_edges.front();
    auto at = std::find(cyc.begin(), cyc.end(), first.u);
    std::rotate(cyc.begin(), at, cyc.end());
    if (cyc[1] != first.v) std::reverse(cyc.begin() + 1, cyc.end());
  }
  std::size_t len_p = 1;

  auto finish = [&](Tag tag, std::vector<Vertex> seq, std::size_t iterations) {
    RefinementOutcome out{tag, Cycle(std::move(seq)), iterations};
    detail::check_refinement(g, c, r, out);
    return out;
  };

  for (std::size_t iteration = 0;; ++iteration) {
    const std::size_t len = cyc.size();
    detail::ensure(iteration <= c.length(), "refinement loop exceeded len(C) iterations");
    detail::ensure(len_p <= max_p, "P_i longer than 4r+1");
    detail::ensure(len_p < len, "Q_i has no edge");
    {
      std::vector<Edge> q_edges;
      for (std::size_t i = len_p; i < len; ++i) q_edges.emplace_back(cyc[i], cyc[(i + 1) % len]);
      std::sort(q_edges.begin(), q_edges.end());
      detail::ensure(detail::edges_subset(q_edges, c_edges), "Q_i is not contained in C");
    }

    const VertexSet on_cycle(cyc);
    const VertexSet b = ball(g, on_cycle, r);
    const Graph ball_graph = g.induced(b);
    if (cycle_rank(ball_graph) <= 1) return finish(Tag::Unicyclic, cyc, iteration);

    std::vector<Vertex> pos(g.vertex_count(), static_cast<Vertex>(-1));
    for (std::size_t i = 0; i < len; ++i) pos[cyc[i]] = static_cast<Vertex>(i);
    auto cyc_edge = [&](Vertex x, Vertex y) {
      const std::size_t a = pos[x];
      const std::size_t b2 = pos[y];
      return (a + 1) % len == b2 || (b2 + 1) % len == a;
    };

    // The connecting path P, endpoints on C_i and interior off C_i.
    std::vector<Vertex> path;
    std::optional<Edge> chord;
    for (Vertex x : on_cycle) {
      for (Vertex y : g.neighbors(x)) {
        if (y > x && on_cycle.contains(y) && !cyc_edge(x, y)) {
          if (!chord || Edge(x, y) < *chord) chord = Edge(x, y);
        }
      }
    }
    if (chord) {
      path = {chord->u, chord->v};
    } else {
      std::vector<Edge> smallest{Edge(cyc[0], cyc[1])};
      for (std::size_t i = 1; i < len; ++i) {
        smallest[0] = std::min(smallest[0], Edge(cyc[i], cyc[(i + 1) % len]));
      }
      auto d_cycle = find_cycle_avoiding(ball_graph.without_edges(smallest), {});
      detail::ensure(d_cycle.has_value(), "ball of rank >= 2 has no second cycle");
      const ShortestPathForest spf = shortest_path_forest(g, on_cycle, r);
      auto dv = d_cycle->vertices();
      std::size_t at = 0;
      for (std::size_t i = 1; i < dv.size(); ++i) {
        const auto di = *spf.depth[dv[i]];
        const auto da = *spf.depth[dv[at]];
        if (di > da || (di == da && dv[i] < dv[at])) at = i;
      }
      const Vertex u = dv[at];
      detail::ensure(*spf.depth[u] >= 1, "chordless C_i but D lies on C_i");
      std::vector<Vertex> p_u = spf.path_to_source(u);
      const Vertex n1 = dv[(at + 1) % dv.size()];
      const Vertex n2 = dv[(at + dv.size() - 1) % dv.size()];
      std::optional<Vertex> v;
      for (Vertex cand : {std::min(n1, n2), std::max(n1, n2)}) {
        if (std::find(p_u.begin(), p_u.end(), cand) == p_u.end()) {
          v = cand;
          break;
        }
      }
      detail::ensure(v.has_value(), "both D-neighbours of u lie on P(u)");
      std::vector<Vertex> p_v = spf.path_to_source(*v);
      detail::ensure(std::find(p_v.begin(), p_v.end(), u) == p_v.end(), "P(v) passes through u");

      // Parent chains merge for good once they meet; the first shared vertex
      // closes the short cycle E.
      for (std::size_t j = 0; j < p_v.size(); ++j) {
        auto hit = std::find(p_u.begin(), p_u.end(), p_v[j]);
        if (hit != p_u.end()) {
          std::vector<Vertex> e(p_u.begin(), hit + 1);
          for (std::size_t t = j; t-- > 0;) e.push_back(p_v[t]);
          return finish(Tag::Short, std::move(e), iteration);
        }
      }
      path.assign(p_u.rbegin(), p_u.rend());
      path.insert(path.end(), p_v.begin(), p_v.end());
    }
    detail::ensure(path.size() - 1 <= 2 * static_cast<std::size_t>(r) + 1,
                   "connecting path longer than 2r+1");

    std::size_t ix = pos[path.front()];
    std::size_t iy = pos[path.back()];
    const bool x_on_p = ix <= len_p;
    const bool y_on_p = iy <= len_p;

    if (x_on_p && y_on_p) {
      // Case 1: P closes a short cycle with the stretch of P_i between its ends.
      if (ix > iy) {
        std::reverse(path.begin(), path.end());
        std::swap(ix, iy);
      }
      std::vector<Vertex> e(cyc.begin() + static_cast<std::ptrdiff_t>(ix),
                            cyc.begin() + static_cast<std::ptrdiff_t>(iy) + 1);
      for (std::size_t t = path.size() - 1; t-- > 1;) e.push_back(path[t]);
      return finish(Tag::Short, std::move(e), iteration);
    }

    const std::size_t q_len = len - len_p;
    std::vector<Vertex> next;
    if (!x_on_p && !y_on_p) {
      // Case 2: C_{i+1} is P plus the stretch of Q_i between its ends.
      if (ix > iy) {
        std::reverse(path.begin(), path.end());
        std::swap(ix, iy);
      }
      next.assign(path.rbegin(), path.rend());
      len_p = path.size() - 1;
      next.insert(next.end(), cyc.begin() + static_cast<std::ptrdiff_t>(ix) + 1,
                  cyc.begin() + static_cast<std::ptrdiff_t>(iy));
    } else {
      // Case 3: x on P_i, y inside Q_i. Arc A keeps P_i from x forward to
      // cyc[len_p]; arc B keeps P_i from cyc[0] to x.
      if (!x_on_p) {
        std::reverse(path.begin(), path.end());
        std::swap(ix, iy);
      }
      const std::size_t plen = path.size() - 1;
      std::vector<Vertex> arc_a(path.rbegin(), path.rend());
      arc_a.insert(arc_a.end(), cyc.begin() + static_cast<std::ptrdiff_t>(ix) + 1,
                   cyc.begin() + static_cast<std::ptrdiff_t>(iy));
      const std::size_t lenp_a = plen + (len_p - ix);
      std::vector<Vertex> arc_b(cyc.begin(), cyc.begin() + static_cast<std::ptrdiff_t>(ix) + 1);
      arc_b.insert(arc_b.end(), path.begin() + 1, path.end());
      const std::size_t lenp_b = arc_b.size() - 1;
      arc_b.insert(arc_b.end(), cyc.begin() + static_cast<std::ptrdiff_t>(iy) + 1, cyc.end());

      const std::size_t cap = 2 * static_cast<std::size_t>(r);
      const bool a_ok = len_p - ix <= cap;
      const bool b_ok = ix <= cap;
      detail::ensure(a_ok || b_ok, "neither arc uses at most 2r edges of P_i");
      bool take_a = a_ok;
      if (a_ok && b_ok) take_a = Cycle(arc_a).edges() < Cycle(arc_b).edges();
      if (take_a) {
        next = std::move(arc_a);
        len_p = lenp_a;
      } else {
        next = std::move(arc_b);
        len_p = lenp_b;
      }
    }
    detail::ensure(next.size() - len_p < q_len, "len(Q_i) did not decrease");
    cyc = std::move(next);
  }
}

}  // namespace coarse_ep

#endif  // COARSE_EP_CYCLE_TOOLS_HPP
