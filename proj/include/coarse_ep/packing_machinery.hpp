#ifndef COARSE_EP_PACKING_MACHINERY_HPP
#define COARSE_EP_PACKING_MACHINERY_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarse_ep/bfs_unicycle.hpp"
#include "coarse_ep/cycle_tools.hpp"
#include "coarse_ep/subcubic_packing.hpp"

namespace coarse_ep {

/// Either k cycles pairwise farther than d apart, or control sets (X, Y).
struct MachineryOutcome {
  enum class Tag { Packing, Control };
  Tag tag = Tag::Control;
  std::vector<Cycle> packing;
  VertexSet x;
  VertexSet y;
  // Elements of Y that neither clause reaches. Only double_unicycle reports
  // them; all_the_ys covers them with the aggregated X or with repairs.
  VertexSet orphans;

  bool is_packing() const { return tag == Tag::Packing; }

  static MachineryOutcome pack(std::vector<Cycle> cycles) {
    MachineryOutcome out;
    out.tag = Tag::Packing;
    out.packing = std::move(cycles);
    return out;
  }
  static MachineryOutcome control(VertexSet x, VertexSet y) {
    MachineryOutcome out;
    out.x = std::move(x);
    out.y = std::move(y);
    return out;
  }
};

/// The cycle closed by a non-tree edge e in U - e0, where e0 is the smallest
/// edge of the root cycle, and its part outside the root cycle.
struct FundamentalCycleInfo {
  Edge edge;
  Cycle cycle;
  std::vector<Edge> path_edges;  // E(C_e) \ E(C)
  VertexSet path_vertices;
  bool c_null = false;  // C_e shares no edge with C
};

/// ceil(s(k) / 2), the half-integer threshold rounded up.
inline std::uint64_t half_s(std::uint64_t k) { return (s_bound(k) + 1) / 2; }

namespace detail {

// Greedy maximal independent set of the auxiliary graph in which two vertex
// sets are adjacent when they are within distance d in G. witness[i] is a
// chosen index within distance d of set i (i itself when chosen).
struct GreedyMis {
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> witness;
};

inline GreedyMis greedy_mis(const Graph& g, const std::vector<VertexSet>& sets, std::uint32_t d) {
  GreedyMis out;
  out.witness.assign(sets.size(), 0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const DistanceMap near = bfs_distances(g, sets[i], d);
    std::optional<std::size_t> hit;
    for (std::size_t j : out.chosen) {
      if (std::ranges::any_of(sets[j], [&](Vertex v) { return near[v].has_value(); })) {
        hit = j;
        break;
      }
    }
    if (hit) {
      out.witness[i] = *hit;
    } else {
      out.witness[i] = i;
      out.chosen.push_back(i);
    }
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const DistanceMap near = bfs_distances(g, sets[i], d);
    ensure(std::ranges::any_of(sets[out.witness[i]], [&](Vertex v) { return near[v].has_value(); }),
           "auxiliary independent set does not dominate");
  }
  return out;
}

// k disjoint cycles of a graph made of cycles plus vertex-disjoint ears, then
// checked to be a d-packing in G.
inline std::vector<Cycle> ears_packing(const Graph& g, const std::vector<Edge>& edges, std::size_t k,
                                       std::uint32_t d, const char* who) {
  const Graph sub = Graph::from_edges(g.vertex_count(), edges);
  for (Vertex v = 0; v < sub.vertex_count(); ++v) {
    const std::size_t deg = sub.degree(v);
    ensure(deg == 0 || deg == 2 || deg == 3, std::string(who) + ": G' has a vertex of degree " +
                                                 std::to_string(deg));
  }
  ensure(branch_vertex_count(sub) >= s_bound(k),
         std::string(who) + ": G' has fewer than s(k) branch vertices");
  std::vector<Cycle> cycles = find_disjoint_cycles(sub, k);
  ensure(is_d_packing(g, cycles, d), std::string(who) + ": disjoint cycles of G' are not a d-packing");
  return cycles;
}

inline void check_radii(std::uint32_t r, std::uint32_t d, std::uint64_t k) {
  require(d >= 1 && d <= r, "need 1 <= d <= r, got d = " + std::to_string(d) + ", r = " +
                                std::to_string(r));
  require(k >= 1, "need k >= 1");
}

inline void check_unicycle(const Graph& g, const Cycle& c, const BfsUnicycle& u, std::uint32_t r,
                           std::uint32_t d) {
  require(c.is_valid_in(g), "cycle " + c.to_string() + " is not a cycle of G");
  require(is_r_unicyclic(g, c, d), "cycle " + c.to_string() + " is not d-unicyclic");
  require(u.root_cycle() == c, "BFS-unicycle is rooted at " + u.root_cycle().to_string() +
                                   ", expected " + c.to_string());
  require(u.radius() == r, "BFS-unicycle radius " + std::to_string(u.radius()) + " differs from r = " +
                               std::to_string(r));
  require(u.host() == g.induced(ball(g, c.vertex_set(), r)), "BFS-unicycle was built for another graph");
}

// Vertices that are U-descendants of some vertex of `y`.
inline std::vector<char> descendant_mask(const BfsUnicycle& u, const VertexSet& y, std::size_t n) {
  std::vector<char> mask(n, 0);
  for (Vertex v : y) {
    if (!u.contains(v)) continue;
    for (Vertex w : u.descendants(v)) mask[w] = 1;
  }
  return mask;
}

}  // namespace detail

/// C_e and P_e for every non-tree edge of U, in ascending edge order.
inline std::vector<FundamentalCycleInfo> fundamental_cycles(const BfsUnicycle& u) {
  const Cycle& c = u.root_cycle();
  const std::vector<Edge> on_cycle = c.edges();
  const Edge e0 = on_cycle.front();
  std::vector<Edge> tree_edges = u.edges();
  std::erase(tree_edges, e0);
  const Graph tree = Graph::from_edges(u.host().vertex_count(), tree_edges);
  ShortestPathForest spf = shortest_path_forest(tree, VertexSet{e0.u});

  std::vector<FundamentalCycleInfo> out;
  for (const Edge& e : u.non_tree_edges()) {
    Vertex a = e.u;
    Vertex b = e.v;
    std::vector<Vertex> front;
    std::vector<Vertex> back;
    while (a != b) {
      if (*spf.depth[a] >= *spf.depth[b]) {
        front.push_back(a);
        a = *spf.parent[a];
      } else {
        back.push_back(b);
        b = *spf.parent[b];
      }
    }
    front.push_back(a);
    front.insert(front.end(), back.rbegin(), back.rend());
    FundamentalCycleInfo info{e, Cycle(std::move(front)), {}, {}, false};
    std::vector<Edge> mine = info.cycle.edges();
    std::set_difference(mine.begin(), mine.end(), on_cycle.begin(), on_cycle.end(),
                        std::back_inserter(info.path_edges));
    info.c_null = info.path_edges.size() == mine.size();
    std::vector<Vertex> vs;
    for (const Edge& pe : info.path_edges) {
      vs.push_back(pe.u);
      vs.push_back(pe.v);
    }
    info.path_vertices = VertexSet(std::move(vs));
    out.push_back(std::move(info));
  }
  return out;
}

/// A d-packing of k cycles, or Control(X, Y): Y holds an endpoint of every
/// non-tree edge of U, |X| < 2k + s(k), and every U-descendant of Y lies in
/// B(X, 2r + d).
inline MachineryOutcome grow_unicycle(const Graph& g, const Cycle& c, const BfsUnicycle& u,
                                      std::uint32_t r, std::uint32_t d, std::uint64_t k) {
  detail::check_radii(r, d, k);
  detail::check_unicycle(g, c, u, r, d);

  const auto infos = fundamental_cycles(u);
  std::vector<VertexSet> paths;
  for (const auto& info : infos) paths.push_back(info.path_vertices);
  const detail::GreedyMis mis = detail::greedy_mis(g, paths, d);

  if (mis.chosen.size() >= k + half_s(k)) {
    std::vector<Cycle> nulls;
    std::vector<Edge> ears = c.edges();
    for (std::size_t i : mis.chosen) {
      if (infos[i].c_null) {
        nulls.push_back(infos[i].cycle);
      } else {
        ears.insert(ears.end(), infos[i].path_edges.begin(), infos[i].path_edges.end());
      }
    }
    if (nulls.size() >= k) {
      nulls.erase(nulls.begin() + static_cast<std::ptrdiff_t>(k), nulls.end());
      detail::ensure(is_d_packing(g, nulls, d), "grow_unicycle: C-null cycles are not a d-packing");
      return MachineryOutcome::pack(std::move(nulls));
    }
    return MachineryOutcome::pack(detail::ears_packing(g, ears, k, d, "grow_unicycle"));
  }

  VertexSet x;
  for (std::size_t i : mis.chosen) {
    x.insert(infos[i].edge.u);
    x.insert(infos[i].edge.v);
  }
  VertexSet y;
  for (std::size_t i = 0; i < infos.size(); ++i) {
    const Edge& w = infos[mis.witness[i]].edge;
    const DistanceMap near = bfs_distances(g, VertexSet{w.u, w.v}, r + d);
    auto covered = [&](Vertex v) {
      return std::ranges::any_of(u.leg(v), [&](Vertex z) { return near[z].has_value(); });
    };
    const Edge& e = infos[i].edge;
    if (covered(e.u)) {
      y.insert(e.u);
    } else {
      detail::ensure(covered(e.v), "grow_unicycle: neither leg of " + to_string(e) + " is near its witness");
      y.insert(e.v);
    }
  }

  // The three control clauses, checked from scratch.
  for (const Edge& e : u.non_tree_edges()) {
    detail::ensure(y.contains(e.u) || y.contains(e.v),
                   "grow_unicycle: Y misses non-tree edge " + to_string(e));
  }
  detail::ensure(x.size() < 2 * k + s_bound(k), "grow_unicycle: |X| >= 2k + s(k)");
  const DistanceMap reach = bfs_distances(g, x, 2 * r + d);
  for (Vertex v : y) {
    for (Vertex w : u.descendants(v)) {
      detail::ensure(reach[w].has_value(), "grow_unicycle: descendant " + std::to_string(w) +
                                               " of Y lies outside B(X, 2r+d)");
    }
  }
  return MachineryOutcome::control(std::move(x), std::move(y));
}

/// A d-packing of k cycles, or Control(X, Y) with Y = B(C1, r) ∩ B(C2, r),
/// |X| < s(k), and every y in Y a U_i-descendant of Y_i or inside B(X, 2r + d).
inline MachineryOutcome double_unicycle(const Graph& g, const Cycle& c1, const BfsUnicycle& u1,
                                        const VertexSet& y1, const Cycle& c2, const BfsUnicycle& u2,
                                        const VertexSet& y2, std::uint32_t r, std::uint32_t d,
                                        std::uint64_t k) {
  detail::check_radii(r, d, k);
  detail::check_unicycle(g, c1, u1, r, d);
  detail::check_unicycle(g, c2, u2, r, d);
  const VertexSet on1 = c1.vertex_set();
  const VertexSet on2 = c2.vertex_set();
  const Distance apart = distance(g, on1, on2);
  detail::require(apart.exceeds(2 * d), "cycles are at distance " + apart.to_string() +
                                            ", not more than 2d = " + std::to_string(2 * d));
  for (const auto& [u, y] : {std::pair{&u1, &y1}, std::pair{&u2, &y2}}) {
    for (const Edge& e : u->non_tree_edges()) {
      detail::require(y->contains(e.u) || y->contains(e.v),
                      "Y_i misses non-tree edge " + to_string(e));
    }
  }

  const std::size_t n = g.vertex_count();
  const VertexSet y = VertexSet::intersect(u1.vertices(), u2.vertices());
  const auto desc1 = detail::descendant_mask(u1, y1, n);
  const auto desc2 = detail::descendant_mask(u2, y2, n);

  // P_x: a shortest V(C1)-V(C2) path inside the union of the two legs of x.
  auto path_for = [&](Vertex x) {
    std::vector<Edge> edges;
    for (const BfsUnicycle* u : {&u1, &u2}) {
      const auto leg = u->leg(x);
      for (std::size_t i = 0; i + 1 < leg.size(); ++i) edges.emplace_back(leg[i], leg[i + 1]);
    }
    const Graph q = Graph::from_edges(n, edges);
    VertexSet start;
    for (const BfsUnicycle* u : {&u1, &u2}) {
      for (Vertex v : u->leg(x)) {
        if (on1.contains(v)) start.insert(v);
      }
    }
    const ShortestPathForest spf = shortest_path_forest(q, start);
    std::optional<Vertex> end;
    for (Vertex v : on2) {
      if (spf.depth[v] && (!end || *spf.depth[v] < *spf.depth[*end])) end = v;
    }
    detail::ensure(end.has_value(), "double_unicycle: legs of " + std::to_string(x) + " do not join the cycles");
    std::vector<Vertex> path = spf.path_to_source(*end);
    detail::ensure(path.size() >= 2 && path.size() <= 2 * static_cast<std::size_t>(r) + 1,
                   "double_unicycle: P_x length outside [1, 2r]");
    return path;
  };

  std::vector<Vertex> interesting;
  std::vector<std::vector<Vertex>> paths;
  std::vector<VertexSet> path_sets;
  for (Vertex x : y) {
    auto p = path_for(x);
    if (std::ranges::any_of(p, [&](Vertex v) { return desc1[v] || desc2[v]; })) continue;
    interesting.push_back(x);
    path_sets.emplace_back(std::vector<Vertex>(p.begin(), p.end()));
    paths.push_back(std::move(p));
  }
  const detail::GreedyMis mis = detail::greedy_mis(g, path_sets, d);

  if (mis.chosen.size() >= half_s(k)) {
    std::vector<Edge> ears = c1.edges();
    const auto more = c2.edges();
    ears.insert(ears.end(), more.begin(), more.end());
    for (std::size_t i : mis.chosen) {
      for (std::size_t j = 0; j + 1 < paths[i].size(); ++j) ears.emplace_back(paths[i][j], paths[i][j + 1]);
    }
    return MachineryOutcome::pack(detail::ears_packing(g, ears, k, d, "double_unicycle"));
  }

  VertexSet x;
  for (std::size_t i : mis.chosen) {
    x.insert(paths[i].front());
    x.insert(paths[i].back());
  }
  detail::ensure(x.size() < s_bound(k), "double_unicycle: |X| >= s(k)");
  // An element whose own legs avoid Y_i can still be uninteresting when its
  // U_1-leg runs through a U_2-descendant of Y_2 (or the reverse), so the
  // domination argument does not reach it. Those are reported, not hidden.
  const DistanceMap reach = bfs_distances(g, x, 2 * r + d);
  VertexSet orphans;
  for (Vertex v : y) {
    if (desc1[v] || desc2[v] || reach[v].has_value()) continue;
    detail::ensure(std::ranges::find(interesting, v) == interesting.end(),
                   "double_unicycle: interesting element " + std::to_string(v) + " is not dominated");
    orphans.insert(v);
  }
  MachineryOutcome out = MachineryOutcome::control(std::move(x), y);
  out.orphans = std::move(orphans);
  return out;
}

/// Result of all_the_ys: a packing, or one BFS-unicycle per cycle with the
/// aggregated control sets.
struct AllTheYs {
  bool packing = false;
  std::vector<Cycle> cycles;
  std::vector<BfsUnicycle> unicycles;
  VertexSet x;
  VertexSet y;
  // Vertices added to X only to cover orphans of double_unicycle; the size
  // bound is asserted on X without them.
  VertexSet repairs;
};

/// 2k^2 + (C(k,2) + k) s(k).
inline std::uint64_t all_the_ys_bound(std::uint64_t k) {
  return 2 * k * k + (k * (k - 1) / 2 + k) * s_bound(k);
}

inline AllTheYs all_the_ys(const Graph& g, const std::vector<Cycle>& cycles, std::uint32_t r,
                           std::uint32_t d, std::uint64_t k) {
  detail::check_radii(r, d, k);
  detail::require(is_d_packing(g, cycles, 2 * d), "cycles do not form a 2d-packing");
  for (const Cycle& c : cycles) {
    detail::require(is_r_unicyclic(g, c, d), "cycle " + c.to_string() + " is not d-unicyclic");
  }
  AllTheYs out;
  if (cycles.size() >= k) {
    out.packing = true;
    out.cycles.assign(cycles.begin(), cycles.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
  }
  std::vector<VertexSet> ys;
  for (const Cycle& c : cycles) {
    out.unicycles.push_back(build_bfs_unicycle(g, c, r));
    MachineryOutcome m = grow_unicycle(g, c, out.unicycles.back(), r, d, k);
    if (m.is_packing()) return {true, std::move(m.packing), {}, {}, {}, {}};
    out.x.insert_all(m.x);
    out.y.insert_all(m.y);
    ys.push_back(std::move(m.y));
  }
  VertexSet orphans;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      MachineryOutcome m = double_unicycle(g, cycles[i], out.unicycles[i], ys[i], cycles[j],
                                           out.unicycles[j], ys[j], r, d, k);
      if (m.is_packing()) return {true, std::move(m.packing), {}, {}, {}, {}};
      out.x.insert_all(m.x);
      out.y.insert_all(m.y);
      orphans.insert_all(m.orphans);
    }
  }
  detail::ensure(out.x.size() < all_the_ys_bound(k), "all_the_ys: |X| too large");
  if (!orphans.empty()) {
    DistanceMap reach = bfs_distances(g, out.x, 2 * r + d);
    for (Vertex v : orphans) {
      if (reach[v]) continue;
      out.repairs.insert(v);
      const DistanceMap more = bfs_distances(g, VertexSet{v}, 2 * r + d);
      for (Vertex w = 0; w < g.vertex_count(); ++w) {
        if (more[w]) reach[w] = more[w];
      }
    }
    out.x.insert_all(out.repairs);
  }

  for (const auto& u : out.unicycles) {
    for (const Edge& e : u.non_tree_edges()) {
      detail::ensure(out.y.contains(e.u) || out.y.contains(e.v),
                     "all_the_ys: Y misses non-tree edge " + to_string(e));
    }
  }
  for (std::size_t i = 0; i < out.unicycles.size(); ++i) {
    for (std::size_t j = i + 1; j < out.unicycles.size(); ++j) {
      detail::ensure(VertexSet::intersect(out.unicycles[i].vertices(), out.unicycles[j].vertices())
                         .is_subset_of(out.y),
                     "all_the_ys: a ball intersection escapes Y");
    }
  }
  const DistanceMap reach = bfs_distances(g, out.x, 2 * r + d);
  for (Vertex v : out.y) {
    detail::ensure(reach[v].has_value(), "all_the_ys: Y escapes B(X, 2r+d)");
  }
  return out;
}

}  // namespace coarse_ep

#endif  // COARSE_EP_PACKING_MACHINERY_HPP
