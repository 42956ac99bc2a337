#ifndef COARSE_EP_SOLVER_HPP
#define COARSE_EP_SOLVER_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coarse_ep/certificate.hpp"
#include "coarse_ep/cycle_tools.hpp"
#include "coarse_ep/forest_helly.hpp"
#include "coarse_ep/packing_machinery.hpp"

namespace coarse_ep {

inline constexpr std::size_t kDefaultTupleCap = 1'000'000;

/// C_list: d-unicyclic cycles forming a 2d-packing. D'_list: cycles of length
/// at most 6d + 2 forming a d-packing. Both shorter than k.
struct SeedState {
  std::vector<Cycle> c_list;
  std::vector<Cycle> d_list;
};

struct SeedResult {
  bool packing = false;
  std::vector<Cycle> cycles;  // the packing, when `packing`
  SeedState state;
};

/// Grows both lists from cycles avoiding the 4d-ball of everything found so
/// far, until one list reaches k or no such cycle is left.
inline SeedResult seed_cycles(const Graph& g, std::uint64_t k, std::uint32_t d) {
  detail::require(k >= 1 && d >= 1, "seed_cycles needs k >= 1 and d >= 1");
  SeedResult out;
  auto& [c_list, d_list] = out.state;
  VertexSet found;
  for (std::uint64_t round = 1;; ++round) {
    const auto next = find_cycle_avoiding(g, ball(g, found, 4 * d));
    if (!next) break;
    detail::ensure(round <= 2 * k - 1, "seed_cycles: more than 2k - 1 rounds");
    RefinementOutcome ref = short_or_unicyclic(g, *next, d);
    if (ref.tag == RefinementOutcome::Tag::Unicyclic) {
      c_list.push_back(ref.cycle);
      detail::ensure(is_d_packing(g, c_list, 2 * d), "seed_cycles: unicyclic seeds are not a 2d-packing");
      if (c_list.size() == k) {
        out.packing = true;
        out.cycles = c_list;
        return out;
      }
    } else {
      detail::ensure(ref.cycle.length() <= 6 * static_cast<std::size_t>(d) + 2,
                     "seed_cycles: short cycle longer than 6d + 2");
      d_list.push_back(ref.cycle);
      detail::ensure(is_d_packing(g, d_list, d), "seed_cycles: short cycles are not a d-packing");
      if (d_list.size() == k) {
        out.packing = true;
        out.cycles = d_list;
        return out;
      }
    }
    found.insert_all(ref.cycle.vertex_set());
  }
  // Stopping invariant: every cycle of G - Y0 meets the 4d-ball of C_list.
  VertexSet y0;
  VertexSet near_c;
  for (const Cycle& c : d_list) y0.insert_all(c.vertex_set());
  for (const Cycle& c : c_list) near_c.insert_all(c.vertex_set());
  y0 = ball(g, y0, 4 * d);
  near_c = ball(g, near_c, 4 * d);
  detail::ensure(!find_cycle_avoiding(g, VertexSet::unite(y0, near_c)),
                 "seed_cycles: a cycle of G - Y0 avoids the 4d-ball of the unicyclic seeds");
  return out;
}

/// An i-exit edge: `inner` lies in B(V(C_i), r - d), `outer` in F0^-.
struct ExitEdge {
  Edge edge;
  std::size_t index = 0;  // i, 0-based into C_list
  Vertex inner = 0;
  Vertex outer = 0;
};

/// A good tuple (e, i, e', j) whose walk W_t = P1 e P0 e' P2 keeps its d-ball
/// clear of Y-hat, with Psi_0 .. Psi_p. psi[0] belongs to F0, psi[l + 1] to
/// F_l.
struct AdmissibleTuple {
  ExitEdge first;
  ExitEdge second;
  std::vector<Vertex> leg1;        // V(C_i) up to first.inner
  std::vector<Vertex> forest_leg;  // first.outer .. second.outer in F0^-
  std::vector<Vertex> leg2;        // second.inner down to V(C_j)
  std::vector<VertexSet> psi;

  std::vector<Vertex> walk() const {
    std::vector<Vertex> w = leg1;
    w.insert(w.end(), forest_leg.begin(), forest_leg.end());
    w.insert(w.end(), leg2.begin(), leg2.end());
    return w;
  }
  std::vector<Edge> walk_edges() const {
    const auto w = walk();
    std::vector<Edge> out;
    for (std::size_t a = 0; a + 1 < w.size(); ++a) out.emplace_back(w[a], w[a + 1]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

namespace detail {

// Everything the tuple stage derives from the seeds and the control sets.
struct Layout {
  std::uint32_t d = 0;
  std::uint32_t r = 0;
  std::size_t p = 0;
  const SeedState* seeds = nullptr;
  const AllTheYs* machinery = nullptr;
  VertexSet y_hat;
  VertexSet x_hat;
  std::vector<DistanceMap> from_c;  // distance to V(C_i), up to r
  std::vector<char> in_f0;
  std::vector<char> in_f0_minus;
  std::vector<char> near_y_hat;     // B(Y-hat, d)
  std::vector<VertexSet> f_sets;    // V(F_0), V(F_1), .., V(F_p)
};

inline Layout make_layout(const Graph& g, const SeedState& seeds, const AllTheYs& machinery,
                          std::uint32_t d) {
  Layout lay;
  lay.d = d;
  lay.r = 6 * d;
  lay.p = seeds.c_list.size();
  lay.seeds = &seeds;
  lay.machinery = &machinery;
  require(!machinery.packing, "control sets expected, got a packing");
  require(machinery.unicycles.size() == lay.p, "one BFS-unicycle per unicyclic seed expected");
  const std::size_t n = g.vertex_count();

  // Y0 = B(D', 4d) with X0 the minimum ids; Y2 = X2 = the minimum ids of C_i.
  VertexSet on_d;
  VertexSet x0;
  for (const Cycle& c : seeds.d_list) {
    on_d.insert_all(c.vertex_set());
    x0.insert(c.vertex_set().min());
  }
  VertexSet y2;
  for (const Cycle& c : seeds.c_list) y2.insert(c.vertex_set().min());
  lay.y_hat = VertexSet::unite(VertexSet::unite(ball(g, on_d, 4 * d), machinery.y), y2);
  lay.x_hat = VertexSet::unite(VertexSet::unite(x0, machinery.x), y2);

  for (const Cycle& c : seeds.c_list) lay.from_c.push_back(bfs_distances(g, c.vertex_set(), lay.r));
  const auto y_mask = lay.y_hat.mask(n);
  lay.in_f0.assign(n, 0);
  lay.in_f0_minus.assign(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (y_mask[v]) continue;
    bool inner = false;
    bool core = false;
    for (const auto& dist : lay.from_c) {
      inner = inner || (dist[v] && *dist[v] <= lay.r - d);
      core = core || (dist[v] && *dist[v] <= lay.r - 2 * d);
    }
    lay.in_f0[v] = !core;
    lay.in_f0_minus[v] = !inner;
  }
  lay.near_y_hat = ball(g, lay.y_hat, d).mask(n);
  lay.f_sets.push_back(VertexSet::from_mask(lay.in_f0));
  for (const auto& dist : lay.from_c) {
    std::vector<char> in(n, 0);
    for (Vertex v = 0; v < n; ++v) in[v] = dist[v].has_value() && !y_mask[v];
    lay.f_sets.push_back(VertexSet::from_mask(in));
  }
  for (const auto& s : lay.f_sets) ensure(is_forest(g.induced(s)), "F_l is not a forest");
  return lay;
}

inline std::vector<ExitEdge> exit_edges(const Graph& g, const Layout& lay) {
  std::vector<ExitEdge> out;
  for (const Edge& e : g.edges()) {
    for (auto [inner, outer] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
      if (!lay.in_f0_minus[outer]) continue;
      for (std::size_t i = 0; i < lay.p; ++i) {
        const auto& dist = lay.from_c[i][inner];
        if (!dist || *dist > lay.r - lay.d) continue;
        ensure(lay.machinery->unicycles[i].depth(inner) == lay.r - lay.d,
               "exit edge " + to_string(e) + " has its inner endpoint off depth r - d");
        out.push_back({e, i, inner, outer});
      }
    }
  }
  return out;
}

inline std::vector<AdmissibleTuple> admissible(const Graph& g, const Layout& lay, std::size_t cap) {
  const std::size_t n = g.vertex_count();
  const std::vector<ExitEdge> exits = exit_edges(g, lay);

  // Good tuples pair distinct exit edges at one component of F0^-.
  const Graph f0_minus = g.induced(lay.in_f0_minus);
  const auto comp = component_labels(f0_minus);
  std::map<std::uint32_t, std::map<Edge, std::uint64_t>> per_component;
  for (const ExitEdge& x : exits) ++per_component[comp[x.outer]][x.edge];
  std::uint64_t good = 0;
  for (const auto& [label, edges] : per_component) {
    std::uint64_t total = 0;
    std::uint64_t same = 0;
    for (const auto& [e, count] : edges) {
      total += count;
      same += count * count;
    }
    good += total * total - same;
  }
  if (good > cap) {
    throw InstanceTooLargeError("instance too large: " + std::to_string(good) +
                                " good tuples exceed the cap of " + std::to_string(cap));
  }

  // The walk avoids B(Y-hat, d) iff both legs and the outer endpoints do and
  // the outer endpoints meet in one tree of F0^- - B(Y-hat, d).
  std::vector<char> clear(n, 0);
  for (Vertex v = 0; v < n; ++v) clear[v] = lay.in_f0_minus[v] && !lay.near_y_hat[v];
  const Graph open_forest = g.induced(clear);
  const auto open_comp = component_labels(open_forest);
  std::vector<std::vector<Vertex>> legs;
  std::vector<std::size_t> usable;
  for (std::size_t a = 0; a < exits.size(); ++a) {
    legs.push_back(lay.machinery->unicycles[exits[a].index].leg(exits[a].inner));
    ensure(legs.back().size() == lay.r - lay.d + 1, "exit leg does not have r - d edges");
    const bool ok = clear[exits[a].outer] &&
                    std::ranges::none_of(legs.back(), [&](Vertex v) { return lay.near_y_hat[v]; });
    if (ok) usable.push_back(a);
  }
  const RootedForest forest(f0_minus);

  std::vector<AdmissibleTuple> out;
  for (std::size_t a : usable) {
    for (std::size_t b : usable) {
      if (exits[a].edge == exits[b].edge) continue;
      if (open_comp[exits[a].outer] != open_comp[exits[b].outer]) continue;
      AdmissibleTuple t;
      t.first = exits[a];
      t.second = exits[b];
      t.leg1.assign(legs[a].rbegin(), legs[a].rend());
      t.forest_leg = forest.path(exits[a].outer, exits[b].outer);
      t.leg2 = legs[b];
      out.push_back(std::move(t));
    }
  }

  for (AdmissibleTuple& t : out) {
    for (Vertex v : t.walk()) {
      ensure(!lay.near_y_hat[v], "admissible walk passes within d of Y-hat");
    }
    ensure(std::ranges::all_of(t.forest_leg, [&](Vertex v) { return lay.in_f0_minus[v] != 0; }),
           "forest leg leaves F0^-");
    t.psi.assign(lay.p + 1, VertexSet{});
    t.psi[0] = ball(g, VertexSet(t.forest_leg), lay.d);
    t.psi[t.first.index + 1] = ball(g, VertexSet(t.leg1), lay.d);
    t.psi[t.second.index + 1].insert_all(ball(g, VertexSet(t.leg2), lay.d));
  }
  return out;
}

// F*: disjoint copies of F_0 .. F_p, copy l of v is l * n + v.
inline RootedForest star_forest(const Graph& g, const Layout& lay) {
  const std::size_t n = g.vertex_count();
  std::vector<Edge> edges;
  for (std::size_t l = 0; l < lay.f_sets.size(); ++l) {
    for (const Edge& e : g.induced(lay.f_sets[l]).edges()) {
      edges.emplace_back(static_cast<Vertex>(l * n + e.u), static_cast<Vertex>(l * n + e.v));
    }
  }
  return RootedForest(Graph::from_edges(n * lay.f_sets.size(), std::move(edges)));
}

inline VertexSet shifted(const VertexSet& s, std::size_t l, std::size_t n) {
  std::vector<Vertex> out;
  for (Vertex v : s) out.push_back(static_cast<Vertex>(l * n + v));
  return VertexSet(std::move(out));
}

inline VertexSet psi_star(const AdmissibleTuple& t, std::size_t n) {
  VertexSet out;
  for (std::size_t l = 0; l < t.psi.size(); ++l) out.insert_all(shifted(t.psi[l], l, n));
  return out;
}

// Psi_0 is one tree of F_0, the other coordinates add at most two more.
inline void check_tuple_shape(const AdmissibleTuple& t, const Layout& lay, const RootedForest& fstar,
                              std::size_t n) {
  ensure(t.psi[0].is_subset_of(lay.f_sets[0]), "Psi_0 leaves F_0");
  ensure(fstar.is_connected(shifted(t.psi[0], 0, n)), "Psi_0 is not connected in F_0");
  std::size_t parts = 0;
  for (std::size_t l = 1; l < t.psi.size(); ++l) {
    if (t.psi[l].empty()) continue;
    ensure(t.psi[l].is_subset_of(lay.f_sets[l]), "Psi_l leaves F_l");
    parts += fstar.components_of(shifted(t.psi[l], l, n));
  }
  ensure(parts <= 2, "Psi_1 .. Psi_p have more than two components");
}

inline bool within(const Graph& g, const std::vector<Vertex>& a, const std::vector<Vertex>& b,
                   std::uint32_t d) {
  const DistanceMap near = bfs_distances(g, VertexSet(a), d);
  return std::ranges::any_of(b, [&](Vertex v) { return near[v].has_value(); });
}

}  // namespace detail

/// Every admissible tuple for the seeds and control sets, with its Psi vector.
/// Throws InstanceTooLargeError when the good tuples exceed `cap`.
inline std::vector<AdmissibleTuple> enumerate_admissible(const Graph& g, const SeedState& seeds,
                                                         const AllTheYs& machinery, std::uint32_t d,
                                                         std::size_t cap = kDefaultTupleCap) {
  detail::require(d >= 1, "enumerate_admissible needs d >= 1");
  const detail::Layout lay = detail::make_layout(g, seeds, machinery, d);
  return detail::admissible(g, lay, cap);
}

struct SolveOptions {
  std::size_t tuple_cap = kDefaultTupleCap;
};

/// Which step produced the certificate, with sizes along the way.
struct SolveTrace {
  std::string stage;  // seeds, machinery, walk-cycles, subcubic, hitting
  std::size_t unicyclic_seeds = 0;
  std::size_t short_seeds = 0;
  std::size_t admissible = 0;
  std::size_t repairs = 0;
};

namespace detail {

inline Certificate checked(const Graph& g, Certificate cert, std::uint64_t k, std::uint32_t d) {
  const Verdict v = verify(g, cert, k, d);
  ensure(v.ok, "solver produced an invalid certificate: " + v.reason);
  return cert;
}

}  // namespace detail

/// A verified certificate: k cycles pairwise farther than d apart, or X with
/// |X| <= f(k) such that G - B(X, 19d) is a forest.
inline Certificate solve(const Graph& g, std::uint64_t k, std::uint32_t d, const SolveOptions& options = {},
                         SolveTrace* trace = nullptr) {
  SolveTrace local;
  SolveTrace& tr = trace ? *trace : local;
  tr = {};
  if (k == 0) {
    tr.stage = "seeds";
    return Certificate::packing(0, d, {});
  }
  detail::require(d >= 1, "solve needs d >= 1");
  const std::uint32_t r = 6 * d;
  const std::size_t n = g.vertex_count();

  const SeedResult seeded = seed_cycles(g, k, d);
  tr.unicyclic_seeds = seeded.state.c_list.size();
  tr.short_seeds = seeded.state.d_list.size();
  if (seeded.packing) {
    tr.stage = "seeds";
    return detail::checked(g, Certificate::packing(k, d, seeded.cycles), k, d);
  }
  const AllTheYs machinery = all_the_ys(g, seeded.state.c_list, r, d, k);
  if (machinery.packing) {
    tr.stage = "machinery";
    return detail::checked(g, Certificate::packing(k, d, machinery.cycles), k, d);
  }
  tr.repairs = machinery.repairs.size();

  const detail::Layout lay = detail::make_layout(g, seeded.state, machinery, d);
  const std::vector<AdmissibleTuple> tuples = detail::admissible(g, lay, options.tuple_cap);
  tr.admissible = tuples.size();
  const RootedForest fstar = detail::star_forest(g, lay);

  // The family A is a set: tuples with equal Psi* share one member.
  std::vector<VertexSet> family;
  std::vector<std::size_t> representative;
  std::map<std::vector<Vertex>, std::size_t> seen;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    detail::check_tuple_shape(tuples[t], lay, fstar, n);
    VertexSet member = detail::psi_star(tuples[t], n);
    detail::ensure(fstar.components_of(member) <= 3, "Psi* has more than three components");
    if (seen.emplace(member.members(), family.size()).second) {
      family.push_back(std::move(member));
      representative.push_back(t);
    }
  }

  const std::uint64_t target = k_star(k);
  const PackOrHitResult helly = subgraphs_pack_or_hit(fstar, family, target, 3);
  if (!helly.is_pack()) {
    VertexSet x3;
    for (const VertexSet& part : helly.hit) {
      for (Vertex v : part) x3.insert(static_cast<Vertex>(v % n));
    }
    tr.stage = "hitting";
    return detail::checked(g, Certificate::hitting(k, d, VertexSet::unite(lay.x_hat, x3)), k, d);
  }

  std::vector<const AdmissibleTuple*> chosen;
  for (std::size_t a : helly.pack) chosen.push_back(&tuples[representative[a]]);
  detail::ensure(chosen.size() == target, "subgraph packing has the wrong size");
  std::vector<std::vector<Vertex>> walks;
  for (const auto* t : chosen) walks.push_back(t->walk());
  for (std::size_t a = 0; a < walks.size(); ++a) {
    for (std::size_t b = a + 1; b < walks.size(); ++b) {
      detail::ensure(!detail::within(g, walks[a], walks[b], d),
                     "walks of disjoint Psi vectors are within distance d");
    }
  }

  std::vector<Cycle> walk_cycles;
  std::vector<const AdmissibleTuple*> paths;
  for (const auto* t : chosen) {
    const Graph sub = Graph::from_edges(n, t->walk_edges());
    if (auto c = find_cycle(sub)) {
      walk_cycles.push_back(*c);
    } else {
      paths.push_back(t);
    }
  }
  if (walk_cycles.size() >= k) {
    walk_cycles.erase(walk_cycles.begin() + static_cast<std::ptrdiff_t>(k), walk_cycles.end());
    tr.stage = "walk-cycles";
    return detail::checked(g, Certificate::packing(k, d, std::move(walk_cycles)), k, d);
  }

  std::vector<Edge> ears;
  std::vector<char> used(lay.p, 0);
  for (const auto* t : paths) {
    used[t->first.index] = 1;
    used[t->second.index] = 1;
    const auto w = t->walk_edges();
    ears.insert(ears.end(), w.begin(), w.end());
  }
  for (std::size_t i = 0; i < lay.p; ++i) {
    if (!used[i]) continue;
    const auto e = seeded.state.c_list[i].edges();
    ears.insert(ears.end(), e.begin(), e.end());
  }
  tr.stage = "subcubic";
  return detail::checked(g, Certificate::packing(k, d, detail::ears_packing(g, ears, k, d, "solve")), k, d);
}

}  // namespace coarse_ep

#endif  // COARSE_EP_SOLVER_HPP
