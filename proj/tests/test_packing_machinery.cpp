#include <catch2/catch_amalgamated.hpp>

#include "coarse_ep/generators.hpp"
#include "coarse_ep/oracle.hpp"
#include "coarse_ep/packing_machinery.hpp"
#include "support.hpp"

using namespace coarse_ep;
using testing_support::kFar;
using testing_support::relax_distances;

namespace {

std::vector<std::pair<Vertex, Vertex>> ring(Vertex from, Vertex len) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i < len; ++i) e.emplace_back(from + i, from + (i + 1) % len);
  return e;
}

Graph from_pairs(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& e) {
  return build_graph(n, std::span<const std::pair<Vertex, Vertex>>(e));
}

std::vector<Vertex> as_vector(const VertexSet& s) { return {s.begin(), s.end()}; }

// Control clauses of all_the_ys, recomputed with edge relaxation.
void check_all_the_ys(const Graph& g, const std::vector<Cycle>& cycles, const AllTheYs& out,
                      std::uint32_t r, std::uint32_t d, std::uint64_t k) {
  if (out.packing) {
    REQUIRE(out.cycles.size() == k);
    REQUIRE(is_d_packing(g, out.cycles, d));
    return;
  }
  REQUIRE(out.unicycles.size() == cycles.size());
  REQUIRE(out.x.size() - out.repairs.size() < all_the_ys_bound(k));
  REQUIRE(out.repairs.is_subset_of(out.y));
  const auto from_x = relax_distances(g, as_vector(out.x));
  for (Vertex y : out.y) REQUIRE(from_x[y] <= 2 * r + d);
  std::vector<std::vector<std::uint32_t>> from_c;
  for (const Cycle& c : cycles) from_c.push_back(relax_distances(g, as_vector(c.vertex_set())));
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const BfsUnicycle& u = out.unicycles[i];
    REQUIRE(u.root_cycle() == cycles[i]);
    // Every ball edge outside U has an endpoint in Y.
    const auto tree = u.edges();
    for (const Edge& e : g.edges()) {
      if (from_c[i][e.u] > r || from_c[i][e.v] > r) continue;
      if (std::ranges::binary_search(tree, e)) continue;
      REQUIRE((out.y.contains(e.u) || out.y.contains(e.v)));
    }
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (from_c[i][v] <= r && from_c[j][v] <= r) REQUIRE(out.y.contains(v));
      }
    }
  }
}

// A greedy 2d-packing of d-unicyclic cycles, grown with short_or_unicyclic.
std::vector<Cycle> unicyclic_seeds(const Graph& g, std::uint32_t d) {
  std::vector<Cycle> out;
  VertexSet blocked;
  while (auto c = find_cycle_avoiding(g, blocked)) {
    RefinementOutcome ref = short_or_unicyclic(g, *c, d);
    blocked.insert_all(c->vertex_set());
    if (ref.tag != RefinementOutcome::Tag::Unicyclic) continue;
    std::vector<Cycle> trial = out;
    trial.push_back(ref.cycle);
    if (!is_d_packing(g, trial, 2 * d)) continue;
    out = std::move(trial);
    blocked.insert_all(ball(g, ref.cycle.vertex_set(), 4 * d));
  }
  return out;
}

}  // namespace

TEST_CASE("half_s rounds up", "[packing_machinery]") {
  CHECK(half_s(1) == 1);
  CHECK(half_s(2) == 20);
  CHECK(half_s(3) == 38);
  CHECK(all_the_ys_bound(1) == 2 + 2);
  CHECK(all_the_ys_bound(2) == 8 + 3 * 40);
}

TEST_CASE("grow_unicycle examples", "[packing_machinery]") {
  SECTION("plain C6") {
    Graph g = from_pairs(6, ring(0, 6));
    Cycle c({0, 1, 2, 3, 4, 5});
    auto out = grow_unicycle(g, c, build_bfs_unicycle(g, c, 1), 1, 1, 2);
    REQUIRE_FALSE(out.is_packing());
    CHECK(out.x.empty());
    CHECK(out.y.empty());
  }
  SECTION("one non-tree edge") {
    auto e = ring(0, 6);
    e.insert(e.end(), {{6, 1}, {8, 2}, {7, 6}, {7, 8}});
    Graph g = from_pairs(9, e);
    Cycle c({0, 1, 2, 3, 4, 5});
    BfsUnicycle u = build_bfs_unicycle(g, c, 2);
    CHECK(u.non_tree_edges() == std::vector<Edge>{{7, 8}});
    auto info = fundamental_cycles(u);
    REQUIRE(info.size() == 1);
    CHECK(info[0].cycle == Cycle({1, 2, 8, 7, 6}));
    CHECK_FALSE(info[0].c_null);
    CHECK(info[0].path_vertices == VertexSet{1, 2, 6, 7, 8});
    auto out = grow_unicycle(g, c, u, 2, 1, 1);
    REQUIRE_FALSE(out.is_packing());
    CHECK(out.x == VertexSet{7, 8});
    CHECK((out.y == VertexSet{7} || out.y == VertexSet{8}));
  }
  SECTION("C-null edges pack") {
    // Triangle 0-1-2 with pendant triangles 3-4-5 (via 0-3) and 6-7-8 (via 1-6).
    auto e = ring(0, 3);
    e.insert(e.end(), {{0, 3}, {3, 4}, {3, 5}, {4, 5}, {1, 6}, {6, 7}, {6, 8}, {7, 8}});
    Graph g = from_pairs(9, e);
    Cycle c({0, 1, 2});
    auto out = grow_unicycle(g, c, build_bfs_unicycle(g, c, 2), 2, 1, 1);
    REQUIRE(out.is_packing());
    CHECK(out.packing == std::vector<Cycle>{Cycle({3, 4, 5})});
  }
  SECTION("ears pack through the subcubic search") {
    auto e = ring(0, 12);
    e.insert(e.end(), {{0, 12}, {12, 14}, {14, 15}, {15, 13}, {13, 2}});
    e.insert(e.end(), {{6, 16}, {16, 18}, {18, 19}, {19, 17}, {17, 8}});
    Graph g = from_pairs(20, e);
    Cycle c({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    auto out = grow_unicycle(g, c, build_bfs_unicycle(g, c, 2), 2, 1, 1);
    REQUIRE(out.is_packing());
    CHECK(out.packing.size() == 1);
    CHECK(out.packing.front().is_valid_in(g));
    auto two = grow_unicycle(g, c, build_bfs_unicycle(g, c, 2), 2, 1, 2);
    CHECK_FALSE(two.is_packing());
  }
  SECTION("preconditions") {
    Graph g = from_pairs(4, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}});
    Cycle c({0, 1, 2});
    CHECK_THROWS_AS(grow_unicycle(g, c, build_bfs_unicycle(g, c, 1), 1, 1, 1), PreconditionError);
    Graph tri = from_pairs(3, ring(0, 3));
    CHECK_THROWS_AS(grow_unicycle(tri, c, build_bfs_unicycle(tri, c, 1), 1, 2, 1), PreconditionError);
    CHECK_THROWS_AS(grow_unicycle(tri, c, build_bfs_unicycle(tri, c, 2), 1, 1, 1), PreconditionError);
  }
}

TEST_CASE("double_unicycle examples", "[packing_machinery]") {
  SECTION("far apart") {
    auto e = ring(0, 3);
    auto t = ring(3, 3);
    e.insert(e.end(), t.begin(), t.end());
    Vertex prev = 2;
    for (Vertex v = 6; v < 15; ++v) e.emplace_back(prev, v), prev = v;
    e.emplace_back(prev, 3);  // distance 10 between the triangles
    Graph g = from_pairs(15, e);
    Cycle c1({0, 1, 2});
    Cycle c2({3, 4, 5});
    auto u1 = build_bfs_unicycle(g, c1, 2);
    auto u2 = build_bfs_unicycle(g, c2, 2);
    auto out = double_unicycle(g, c1, u1, {}, c2, u2, {}, 2, 1, 2);
    REQUIRE_FALSE(out.is_packing());
    CHECK(out.x.empty());
    CHECK(out.y.empty());
  }
  SECTION("joined by a path of length 2r") {
    const std::uint32_t d = 1;
    const std::uint32_t r = 6 * d;
    // Triangles {0,1,2} and {14,15,16}; path 2-3-...-14 has 12 edges.
    auto e = ring(0, 3);
    e.insert(e.end(), {{14, 15}, {15, 16}, {16, 14}});
    for (Vertex v = 2; v < 14; ++v) e.emplace_back(v, v + 1);
    Graph g = from_pairs(17, e);
    Cycle c1({0, 1, 2});
    Cycle c2({14, 15, 16});
    auto u1 = build_bfs_unicycle(g, c1, r);
    auto u2 = build_bfs_unicycle(g, c2, r);
    auto out = double_unicycle(g, c1, u1, {}, c2, u2, {}, r, d, 2);
    REQUIRE_FALSE(out.is_packing());
    CHECK(out.y == VertexSet{8});
    CHECK(out.x == VertexSet{2, 14});
    auto one = double_unicycle(g, c1, u1, {}, c2, u2, {}, r, d, 1);
    REQUIRE(one.is_packing());
    CHECK(is_d_packing(g, one.packing, d));
    // With 8 already controlled by Y_1, nothing is interesting.
    auto controlled = double_unicycle(g, c1, u1, VertexSet{7}, c2, u2, {}, r, d, 1);
    REQUIRE_FALSE(controlled.is_packing());
    CHECK(controlled.x.empty());
  }
  SECTION("too close") {
    Graph g = from_pairs(7, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 4}});
    Cycle c1({0, 1, 2});
    Cycle c2({4, 5, 6});
    auto u1 = build_bfs_unicycle(g, c1, 2);
    auto u2 = build_bfs_unicycle(g, c2, 2);
    try {
      double_unicycle(g, c1, u1, {}, c2, u2, {}, 2, 1, 1);
      FAIL("expected a precondition error");
    } catch (const PreconditionError& err) {
      CHECK(std::string(err.what()).find("distance 2") != std::string::npos);
    }
  }
}

TEST_CASE("all_the_ys examples", "[packing_machinery]") {
  Graph tree = from_pairs(4, {{0, 1}, {1, 2}, {1, 3}});
  auto empty = all_the_ys(tree, {}, 6, 1, 2);
  CHECK_FALSE(empty.packing);
  CHECK(empty.x.empty());
  CHECK(empty.y.empty());

  auto e = ring(0, 6);
  e.insert(e.end(), {{0, 6}, {6, 7}, {6, 8}, {3, 9}});
  Graph g = from_pairs(10, e);
  Cycle c6({0, 1, 2, 3, 4, 5});
  auto one = all_the_ys(g, {c6}, 6, 1, 2);
  CHECK_FALSE(one.packing);
  CHECK(one.x.empty());
  CHECK(one.y.empty());
  CHECK(one.unicycles.size() == 1);

  auto done = all_the_ys(g, {c6}, 6, 1, 1);
  CHECK(done.packing);
  CHECK(done.cycles == std::vector<Cycle>{c6});

  Graph close = from_pairs(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}});
  CHECK_THROWS_AS(all_the_ys(close, {Cycle({0, 1, 2}), Cycle({3, 4, 5})}, 6, 1, 3), PreconditionError);
}

TEST_CASE("double_unicycle orphans and their repair", "[packing_machinery]") {
  // C1 = 0..4 and C2 = 11..15 joined through the 5-cycle 5..9. Vertex 6 has
  // legs 6,5,10,2 and 6,7,16,11 that avoid Y_1 = {7} and Y_2 = {5}, yet its
  // path P_6 passes through both, so no interesting element dominates it.
  const Graph g = from_pairs(17, {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {2, 10}, {3, 4}, {5, 6},
                                  {5, 9}, {5, 10}, {6, 7}, {7, 8}, {7, 16}, {8, 9}, {11, 12},
                                  {11, 15}, {11, 16}, {12, 13}, {13, 14}, {14, 15}});
  const Cycle c1({0, 1, 2, 3, 4});
  const Cycle c2({11, 12, 13, 14, 15});
  const BfsUnicycle u1 = build_bfs_unicycle(g, c1, 6);
  const BfsUnicycle u2 = build_bfs_unicycle(g, c2, 6);
  const auto g1 = grow_unicycle(g, c1, u1, 6, 1, 3);
  const auto g2 = grow_unicycle(g, c2, u2, 6, 1, 3);
  REQUIRE(g1.y == VertexSet{7});
  REQUIRE(g2.y == VertexSet{5});
  const auto both = double_unicycle(g, c1, u1, g1.y, c2, u2, g2.y, 6, 1, 3);
  REQUIRE_FALSE(both.is_packing());
  CHECK(both.x.empty());
  CHECK(both.orphans.contains(6));

  // The grown X = {5, 7, 8, 9} already covers every orphan.
  const AllTheYs all = all_the_ys(g, {c1, c2}, 6, 1, 3);
  REQUIRE_FALSE(all.packing);
  CHECK(all.repairs.empty());
  check_all_the_ys(g, {c1, c2}, all, 6, 1, 3);
}

TEST_CASE("all_the_ys control clauses on random graphs", "[packing_machinery][property]") {
  std::size_t controls = 0;
  std::size_t packings = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    Rng rng(seed + 400);
    const std::uint32_t d = 1 + static_cast<std::uint32_t>(seed % 2);
    const std::uint32_t r = 6 * d;
    Graph g = seed % 3 == 0 ? cycle_chain(2 + rng.below(3), 3 + rng.below(4), rng.below(12))
                            : random_subdivision(6 + rng.below(10), 7 + rng.below(8), 1 + rng.below(3), seed);
    auto seeds = unicyclic_seeds(g, d);
    for (std::uint64_t k = 1; k <= 3; ++k) {
      AllTheYs out = all_the_ys(g, seeds, r, d, k);
      check_all_the_ys(g, seeds, out, r, d, k);
      if (out.packing) {
        ++packings;
        if (g.vertex_count() <= 18) REQUIRE(max_d_packing(g, d) >= k);
      } else {
        ++controls;
      }
    }
  }
  CHECK(controls >= 100);
  CHECK(packings >= 40);
}

TEST_CASE("grow and double clauses on random graphs", "[packing_machinery][property]") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed + 900);
    const std::uint32_t d = 1;
    const std::uint32_t r = 2 + static_cast<std::uint32_t>(rng.below(5));
    Graph g = random_subdivision(8 + rng.below(12), 10 + rng.below(10), 1 + rng.below(2), seed + 3);
    auto seeds = unicyclic_seeds(g, d);
    std::vector<VertexSet> ys;
    std::vector<BfsUnicycle> us;
    for (const Cycle& c : seeds) {
      us.push_back(build_bfs_unicycle(g, c, r));
      auto out = grow_unicycle(g, c, us.back(), r, d, 1 + seed % 2);
      ++checked;
      if (out.is_packing()) {
        REQUIRE(is_d_packing(g, out.packing, d));
        ys.push_back(ball(g, c.vertex_set(), r));  // any cover of the non-tree edges
        continue;
      }
      REQUIRE(out.x.size() < 2 * (1 + seed % 2) + s_bound(1 + seed % 2));
      const auto from_x = relax_distances(g, as_vector(out.x));
      for (const Edge& e : us.back().non_tree_edges()) REQUIRE((out.y.contains(e.u) || out.y.contains(e.v)));
      for (Vertex y : out.y) {
        for (Vertex w : us.back().descendants(y)) REQUIRE(from_x[w] <= 2 * r + d);
      }
      ys.push_back(out.y);
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      for (std::size_t j = i + 1; j < seeds.size(); ++j) {
        auto out = double_unicycle(g, seeds[i], us[i], ys[i], seeds[j], us[j], ys[j], r, d, 1);
        ++checked;
        if (out.is_packing()) {
          REQUIRE(is_d_packing(g, out.packing, d));
          continue;
        }
        REQUIRE(out.x.size() < s_bound(1));
        const auto from_x = relax_distances(g, as_vector(out.x));
        const auto a = relax_distances(g, as_vector(seeds[i].vertex_set()));
        const auto b = relax_distances(g, as_vector(seeds[j].vertex_set()));
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
          const bool both = a[v] <= r && b[v] <= r;
          REQUIRE(out.y.contains(v) == both);
          if (!both) continue;
          bool below = false;
          for (Vertex z : us[i].leg(v)) below = below || ys[i].contains(z);
          for (Vertex z : us[j].leg(v)) below = below || ys[j].contains(z);
          // Orphans are exactly the elements neither clause reaches.
          REQUIRE(out.orphans.contains(v) == !(below || from_x[v] <= 2 * r + d));
        }
      }
    }
  }
  CHECK(checked >= 150);
}
