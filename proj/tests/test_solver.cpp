#include <catch2/catch_amalgamated.hpp>

#include "coarse_ep/generators.hpp"
#include "coarse_ep/oracle.hpp"
#include "coarse_ep/solver.hpp"
#include "support.hpp"

using namespace coarse_ep;
using testing_support::relax_distances;

namespace {

Graph from_pairs(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& e) {
  return build_graph(n, std::span<const std::pair<Vertex, Vertex>>(e));
}

// C6 on 0..5 with arms 2-6-..-10 and 4-11-..-15 (tips at depth 5), joined
// outside the 6-ball by 10-16-17-18-19-15 when `joined`. d = 1, r = 6.
Graph two_arms(bool joined, bool second_arm = true) {
  std::vector<std::pair<Vertex, Vertex>> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}};
  Vertex prev = 2;
  for (Vertex v = 6; v <= 10; ++v) e.emplace_back(prev, v), prev = v;
  prev = 4;
  if (second_arm) {
    for (Vertex v = 11; v <= 15; ++v) e.emplace_back(prev, v), prev = v;
  }
  e.emplace_back(10, 16);
  e.emplace_back(16, 17);
  if (joined) {
    e.emplace_back(17, 18);
    e.emplace_back(18, 19);
    e.emplace_back(19, 15);
  }
  return from_pairs(20, e);
}

// Acyclic iff no edge joins two vertices already connected (union-find).
bool union_find_forest(const Graph& g) {
  std::vector<Vertex> up(g.vertex_count());
  for (Vertex v = 0; v < up.size(); ++v) up[v] = v;
  auto root = [&](Vertex v) {
    while (up[v] != v) v = up[v] = up[up[v]];
    return v;
  };
  for (const Edge& e : g.edges()) {
    const Vertex a = root(e.u);
    const Vertex b = root(e.v);
    if (a == b) return false;
    up[a] = b;
  }
  return true;
}

// Brute-force check of a certificate with relaxation distances only.
void check_certificate(const Graph& g, const Certificate& cert, std::uint64_t k, std::uint32_t d) {
  REQUIRE(cert.k == k);
  REQUIRE(cert.d == d);
  if (cert.is_packing()) {
    REQUIRE(cert.cycles.size() == k);
    for (std::size_t a = 0; a < cert.cycles.size(); ++a) {
      REQUIRE(cert.cycles[a].is_valid_in(g));
      const auto& vs = cert.cycles[a].vertices();
      const auto dist = relax_distances(g, std::vector<Vertex>(vs.begin(), vs.end()));
      for (std::size_t b = a + 1; b < cert.cycles.size(); ++b) {
        for (Vertex v : cert.cycles[b].vertices()) REQUIRE(dist[v] > d);
      }
    }
    return;
  }
  REQUIRE(cert.radius == 19 * d);
  REQUIRE(cert.budget == f_bound(k));
  REQUIRE(BigInt(cert.x.size()) <= cert.budget);
  const auto dist = relax_distances(g, cert.x.members());
  std::vector<char> keep(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) keep[v] = dist[v] > 19 * d;
  REQUIRE(union_find_forest(g.induced(keep)));
}

}  // namespace

TEST_CASE("bounds f and g", "[solver]") {
  CHECK(g_bound(1) == 19);
  CHECK(g_bound(3) == 57);
  CHECK(k_star(1) == 2);
  CHECK(k_star(2) == 22);
  CHECK(k_star(3) == 41);
  // 2 + 2 + 1 * 2 + ell*(2, 3), with ell*(2, 3) = 418039160 pinned in the Helly tests.
  CHECK(f_bound(1) == BigInt(418039166));
  CHECK(f_bound(1) == 6 + budgets(2, 3).ell_star);
  CHECK(f_bound(2) == BigInt("23260633646591917709389690692"));
  CHECK(f_bound(3) == BigInt("1832060833930778606440879439186834"));
  CHECK_THROWS_AS(g_bound(0), PreconditionError);
  CHECK_THROWS_AS(f_bound(0), PreconditionError);
}

TEST_CASE("seed_cycles examples", "[solver]") {
  const Graph path = from_pairs(4, {{0, 1}, {1, 2}, {2, 3}});
  const SeedResult none = seed_cycles(path, 2, 1);
  CHECK_FALSE(none.packing);
  CHECK(none.state.c_list.empty());
  CHECK(none.state.d_list.empty());

  const Graph triangle = from_pairs(3, {{0, 1}, {1, 2}, {2, 0}});
  const SeedResult one = seed_cycles(triangle, 1, 1);
  REQUIRE(one.packing);
  CHECK(one.cycles == std::vector<Cycle>{Cycle({0, 1, 2})});

  const SeedResult two = seed_cycles(triangle, 2, 1);
  CHECK_FALSE(two.packing);
  CHECK(two.state.c_list == std::vector<Cycle>{Cycle({0, 1, 2})});
  CHECK(two.state.d_list.empty());

  // Two far triangles pack at the seed stage.
  const Graph far = disjoint_cycles(2, 3, 5);
  const SeedResult pair = seed_cycles(far, 2, 2);
  REQUIRE(pair.packing);
  CHECK(is_d_packing(far, pair.cycles, 2));
  CHECK_THROWS_AS(seed_cycles(triangle, 0, 1), PreconditionError);
}

TEST_CASE("enumerate_admissible examples", "[solver]") {
  // No unicyclic seeds: no exit edges.
  const Graph path = from_pairs(4, {{0, 1}, {1, 2}, {2, 3}});
  const AllTheYs empty = all_the_ys(path, {}, 6, 1, 2);
  CHECK(enumerate_admissible(path, SeedState{}, empty, 1).empty());

  const Cycle c6({0, 1, 2, 3, 4, 5});
  const SeedState seeds{{c6}, {}};

  // One arm: a single exit edge 10-16.
  const Graph lone = two_arms(false, false);
  const AllTheYs lone_m = all_the_ys(lone, {c6}, 6, 1, 2);
  REQUIRE_FALSE(lone_m.packing);
  CHECK(enumerate_admissible(lone, seeds, lone_m, 1).empty());

  // Two arms joined far out: exit edges 10-16 and 15-19, both orders.
  const Graph joined = two_arms(true);
  const AllTheYs m = all_the_ys(joined, {c6}, 6, 1, 2);
  REQUIRE_FALSE(m.packing);
  CHECK(m.y.empty());
  const auto tuples = enumerate_admissible(joined, seeds, m, 1);
  REQUIRE(tuples.size() == 2);
  const AdmissibleTuple& t = tuples[0];
  CHECK(t.first.edge == Edge(10, 16));
  CHECK(t.second.edge == Edge(15, 19));
  CHECK(t.leg1 == std::vector<Vertex>{2, 6, 7, 8, 9, 10});
  CHECK(t.forest_leg == std::vector<Vertex>{16, 17, 18, 19});
  CHECK(t.leg2 == std::vector<Vertex>{15, 14, 13, 12, 11, 4});
  REQUIRE(t.psi.size() == 2);
  CHECK(t.psi[0] == VertexSet{10, 15, 16, 17, 18, 19});
  CHECK(t.psi[1] == ball(joined, VertexSet{2, 4, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}, 1));
  CHECK(tuples[1].first.edge == Edge(15, 19));
  CHECK(tuples[1].second.edge == Edge(10, 16));

  // A short seed cycle hung off the forest leg puts it inside Y0 = B(D', 4d).
  const Graph hung = from_pairs(22, [] {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (const Edge& x : two_arms(true).edges()) e.emplace_back(x.u, x.v);
    e.insert(e.end(), {{17, 20}, {20, 21}, {21, 17}});
    return e;
  }());
  const AllTheYs hm = all_the_ys(hung, {c6}, 6, 1, 2);
  REQUIRE_FALSE(hm.packing);
  CHECK(enumerate_admissible(hung, SeedState{{c6}, {Cycle({17, 20, 21})}}, hm, 1).empty());
}

TEST_CASE("tuple cap", "[solver]") {
  const Graph joined = two_arms(true);
  const Cycle c6({0, 1, 2, 3, 4, 5});
  const AllTheYs m = all_the_ys(joined, {c6}, 6, 1, 2);
  CHECK_THROWS_AS(enumerate_admissible(joined, SeedState{{c6}, {}}, m, 1, 1), InstanceTooLargeError);
  CHECK(enumerate_admissible(joined, SeedState{{c6}, {}}, m, 1, 2).size() == 2);
}

TEST_CASE("solve examples", "[solver]") {
  const Graph path = from_pairs(5, {{0, 1}, {1, 2}, {3, 4}});
  const Certificate forest = solve(path, 3, 2);
  REQUIRE_FALSE(forest.is_packing());
  CHECK(forest.x.empty());
  CHECK(verify(path, forest, 3, 2).ok);

  const Graph triangle = from_pairs(3, {{0, 1}, {1, 2}, {2, 0}});
  const Certificate one = solve(triangle, 1, 1);
  REQUIRE(one.is_packing());
  CHECK(one.cycles == std::vector<Cycle>{Cycle({0, 1, 2})});

  const Certificate two = solve(triangle, 2, 1);
  REQUIRE_FALSE(two.is_packing());
  CHECK(two.radius == 19);
  CHECK(BigInt(two.x.size()) <= f_bound(2));
  CHECK(min_ball_hitting(triangle, 38) == 1);
  CHECK(min_ball_hitting(triangle, 19) <= two.x.size());
  check_certificate(triangle, two, 2, 1);

  const Certificate zero = solve(triangle, 0, 1);
  CHECK(zero.is_packing());
  CHECK(zero.cycles.empty());
  CHECK_THROWS_AS(solve(triangle, 1, 0), PreconditionError);

  // The joined arms at k = 2: one unicyclic seed, admissible tuples, a hit.
  SolveTrace trace;
  const Certificate arms = solve(two_arms(true), 2, 1, {}, &trace);
  CHECK(trace.unicyclic_seeds + trace.short_seeds >= 1);
  check_certificate(two_arms(true), arms, 2, 1);
}

TEST_CASE("verify examples", "[solver]") {
  const Graph triangle = from_pairs(3, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(verify(triangle, Certificate::packing(1, 1, {Cycle({0, 1, 2})}), 1, 1).ok);

  const Verdict open = verify(triangle, Certificate::hitting(1, 1, {}), 1, 1);
  CHECK_FALSE(open.ok);
  CHECK_THAT(open.reason, Catch::Matchers::ContainsSubstring("not a forest"));

  // Triangles 0-1-2 and 4-5-6 joined by the path 2-3-4 of length d = 2.
  const Graph close = from_pairs(7, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 4}});
  const Certificate near = Certificate::packing(2, 2, {Cycle({0, 1, 2}), Cycle({4, 5, 6})});
  const Verdict bad = verify(close, near, 2, 2);
  CHECK_FALSE(bad.ok);
  CHECK_THAT(bad.reason, Catch::Matchers::ContainsSubstring("distance not > d"));
  CHECK(verify(close, Certificate::packing(2, 1, near.cycles), 2, 1).ok);

  // Wrong k or d, foreign cycles, a shrunken radius, an inflated budget.
  CHECK_FALSE(verify(triangle, Certificate::packing(1, 1, {Cycle({0, 1, 2})}), 2, 1).ok);
  CHECK_FALSE(verify(close, Certificate::packing(1, 1, {Cycle({0, 1, 3})}), 1, 1).ok);
  Certificate hit = Certificate::hitting(1, 1, VertexSet{0});
  CHECK(verify(triangle, hit, 1, 1).ok);
  hit.radius = 18;
  CHECK_FALSE(verify(triangle, hit, 1, 1).ok);
  hit.radius = 19;
  hit.budget += 1;
  CHECK_FALSE(verify(triangle, hit, 1, 1).ok);
  CHECK_FALSE(verify(triangle, Certificate::hitting(1, 1, VertexSet{7}), 1, 1).ok);
}

TEST_CASE("certificate JSON round trip", "[solver]") {
  const Certificate pack = Certificate::packing(2, 1, {Cycle({0, 1, 2}), Cycle({5, 6, 7, 8})});
  const std::string text = certificate_text(pack);
  CHECK(text.find("\"type\": \"packing\"") != std::string::npos);
  CHECK(parse_certificate(text) == pack);

  const Certificate hit = Certificate::hitting(2, 3, VertexSet{4, 9});
  const std::string hit_text = certificate_text(hit);
  CHECK(hit_text.find("\"budget\": \"23260633646591917709389690692\"") != std::string::npos);
  CHECK(hit_text.find("\"radius\": 57") != std::string::npos);
  CHECK(parse_certificate(hit_text) == hit);

  CHECK_THROWS_AS(parse_certificate("{"), InputError);
  CHECK_THROWS_AS(parse_certificate(R"({"type":"maybe","k":1,"d":1})"), InputError);
  CHECK_THROWS_AS(parse_certificate(R"({"type":"hitting","k":1,"d":1,"X":[],"radius":19,"budget":5})"),
                  InputError);
  CHECK_THROWS_AS(parse_certificate(R"({"type":"packing","k":1,"d":1,"cycles":[[0,1]]})"), InputError);
}

TEST_CASE("solve on random graphs", "[solver][property]") {
  std::size_t packings = 0;
  std::size_t hittings = 0;
  std::size_t with_tuples = 0;
  std::size_t oracle_checked = 0;
  for (std::uint64_t seed = 0; seed < 160; ++seed) {
    Rng rng(seed + 77);
    Graph g;
    switch (seed % 4) {
      case 0: {
        const std::size_t n = 6 + rng.below(9);
        g = random_gnm(n, std::min<std::size_t>(n * (n - 1) / 2, 5 + rng.below(12)), seed);
        break;
      }
      case 1: {
        const std::size_t n = 4 + rng.below(5);
        g = random_subdivision(n, std::min<std::size_t>(n * (n - 1) / 2, 5 + rng.below(5)),
                               1 + rng.below(4), seed);
        break;
      }
      case 2: g = cycle_chain(2 + rng.below(3), 3 + rng.below(5), rng.below(10)); break;
      default: g = grid_graph(2 + rng.below(3), 2 + rng.below(4)); break;
    }
    for (std::uint64_t k = 1; k <= 3; ++k) {
      for (std::uint32_t d = 1; d <= 2; ++d) {
        SolveTrace trace;
        const Certificate cert = solve(g, k, d, {}, &trace);
        check_certificate(g, cert, k, d);
        REQUIRE(verify(g, cert, k, d).ok);
        REQUIRE(solve(g, k, d) == cert);
        with_tuples += trace.admissible > 0;
        if (cert.is_packing()) {
          ++packings;
        } else {
          ++hittings;
        }
        if (g.vertex_count() <= 14) {
          ++oracle_checked;
          if (cert.is_packing()) {
            REQUIRE(max_d_packing(g, d) >= k);
          } else {
            REQUIRE(min_ball_hitting(g, 19 * d) <= cert.x.size());
          }
        }
      }
    }
  }
  CHECK(packings >= 100);
  CHECK(hittings >= 100);
  CHECK(oracle_checked >= 200);
  INFO("instances with admissible tuples: " << with_tuples);
  CHECK(with_tuples >= 1);
}
