#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "coarse_ep/generators.hpp"
#include "coarse_ep/oracle.hpp"
#include "coarse_ep/subcubic_packing.hpp"

using namespace coarse_ep;

namespace {

Graph k4_copies(std::size_t copies) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex c = 0; c < copies; ++c) {
    const Vertex b = 4 * c;
    e.insert(e.end(), {{b, b + 1}, {b, b + 2}, {b, b + 3}, {b + 1, b + 2}, {b + 1, b + 3},
                       {b + 2, b + 3}});
  }
  return build_graph(4 * copies, e);
}

void check_disjoint(const Graph& g, const std::vector<Cycle>& cycles, std::size_t k) {
  REQUIRE(cycles.size() == k);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    REQUIRE(cycles[i].is_valid_in(g));
    for (std::size_t j = 0; j < i; ++j) {
      REQUIRE_FALSE(cycles[i].vertex_set().intersects(cycles[j].vertex_set()));
    }
  }
}

}  // namespace

TEST_CASE("s_bound values", "[subcubic]") {
  CHECK(s_bound(1) == 2);
  CHECK(s_bound(2) == 40);
  CHECK(s_bound(4) == 112);
  CHECK(s_bound(16) == 640);
  CHECK(s_bound(256) == 15360);
  CHECK_THROWS_AS(s_bound(0), PreconditionError);
  // Away from exact integers a plain double evaluation agrees.
  for (std::uint64_t k = 2; k <= 200; ++k) {
    const double x = 4.0 * k * (std::log2(k) + std::log2(std::log2(k)) + 4.0);
    if (std::fabs(x - std::round(x)) < 1e-6) continue;
    REQUIRE(s_bound(k) == static_cast<std::uint64_t>(std::ceil(x)));
  }
  CHECK(s_bound(3) == 75);
}

TEST_CASE("find_disjoint_cycles examples", "[subcubic]") {
  Graph k4 = k4_copies(1);
  check_disjoint(k4, find_disjoint_cycles(k4, 1), 1);
  CHECK(find_disjoint_cycles(k4, 1).front().length() == 3);

  Graph two = k4_copies(2);
  auto pair = find_disjoint_cycles(two, 2);
  check_disjoint(two, pair, 2);
  CHECK(max_d_packing(two, 0) == 2);

  // Theta graph: 0 and 1 joined by paths 0-2-1, 0-3-4-1, 0-5-6-7-1.
  Graph theta = build_graph(8, {{0, 2}, {2, 1}, {0, 3}, {3, 4}, {4, 1}, {0, 5}, {5, 6}, {6, 7},
                                {7, 1}});
  auto one = find_disjoint_cycles(theta, 1);
  check_disjoint(theta, one, 1);
  CHECK(one.front() == Cycle({0, 2, 1, 4, 3}));

  CHECK_THROWS_AS(find_disjoint_cycles(theta, 2), PreconditionError);
  CHECK_THROWS_AS(find_disjoint_cycles(build_graph(3, {{0, 1}, {1, 2}}), 1), PreconditionError);
  CHECK_THROWS_AS(find_disjoint_cycles(k4, 0), PreconditionError);
}

TEST_CASE("greedy failure is recovered by the exhaustive fallback", "[subcubic]") {
  // Pentagons 0-1-2-3-8 and 4-7-6-5-9 plus edges 1-4 and 2-7. The square
  // 1-4-7-2 is the unique shortest cycle and meets both pentagons.
  Graph g = build_graph(10, {{0, 1}, {1, 2}, {2, 3}, {3, 8}, {8, 0}, {4, 7}, {7, 6}, {6, 5},
                             {5, 9}, {9, 4}, {1, 4}, {2, 7}});
  auto found = find_disjoint_cycles(g, 2);
  check_disjoint(g, found, 2);
}

TEST_CASE("find_disjoint_cycles agrees with the exhaustive oracle", "[subcubic][property]") {
  std::size_t instances = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const std::size_t branch = 2 + 2 * (seed % 6);
    Graph g = random_subcubic(branch, seed % 4, seed);
    if (g.vertex_count() > 18) continue;
    ++instances;
    const std::size_t best = max_d_packing(g, 0);
    REQUIRE(best >= 1);
    for (std::size_t k = 1; k <= 4; ++k) {
      auto found = try_find_disjoint_cycles(g, k);
      REQUIRE(found.has_value() == (best >= k));
      if (found) check_disjoint(g, *found, k);
      if (branch_vertex_count(g) >= s_bound(k)) REQUIRE(best >= k);
    }
  }
  CHECK(instances >= 100);
}
