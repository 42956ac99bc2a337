#ifndef COARSE_EP_SUITES_HPP
#define COARSE_EP_SUITES_HPP

// Randomised property suites shared by `coarse-ep selftest` and the
// acceptance binary. Every suite is a pure function of its seed and size, so
// reports are reproducible.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "coarse_ep/certificate.hpp"
#include "coarse_ep/cycle_tools.hpp"
#include "coarse_ep/forest_helly.hpp"
#include "coarse_ep/generators.hpp"
#include "coarse_ep/oracle.hpp"
#include "coarse_ep/solver.hpp"
#include "coarse_ep/subcubic_packing.hpp"

namespace coarse_ep::suites {

struct Report {
  explicit Report(std::string title) : name(std::move(title)) {}

  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::string detail;

  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

/// Runs job(i) for i in [0, count) on `threads` workers. Each job owns its
/// slot of the result vector, so the merge order is the index order.
template <class Result>
std::vector<Result> parallel_map(std::size_t count, unsigned threads,
                                 const std::function<Result(std::size_t)>& job) {
  std::vector<Result> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// 64-bit FNV-1a, used to fingerprint certificate text.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ------------------------------------------------------------------ corpus

struct Instance {
  std::string name;
  Graph graph;
};

/// Instance i of the mixed corpus. Kinds rotate through gnm (n <= 60,
/// m <= 120, every other one with n <= 14), grids up to 8x8, disjoint cycles
/// and random subdivisions.
inline Instance corpus_instance(std::uint64_t seed, std::size_t i) {
  Rng rng(seed * 1000003 + i);
  const std::uint64_t sub = rng.below(1u << 30);
  auto capped = [](std::size_t n, std::size_t m) { return std::min(m, n * (n - 1) / 2); };
  switch (i % 4) {
    case 0: {
      const std::size_t n = (i / 4) % 2 == 0 ? rng.between(4, 14) : rng.between(4, 60);
      const std::size_t m = capped(n, rng.between(0, std::min<std::size_t>(120, n + n / 2 + 4)));
      return {"gnm-" + std::to_string(n) + "-" + std::to_string(m) + "-" + std::to_string(sub),
              random_gnm(n, m, sub)};
    }
    case 1: {
      const std::size_t rows = rng.between(1, 8);
      const std::size_t cols = rng.between(1, 8);
      return {"grid-" + std::to_string(rows) + "x" + std::to_string(cols), grid_graph(rows, cols)};
    }
    case 2: {
      const std::size_t k = rng.between(1, 4);
      const std::size_t len = rng.between(3, 8);
      return {"disjoint-" + std::to_string(k) + "x" + std::to_string(len),
              disjoint_cycles(k, len, 0)};
    }
    default: {
      const std::size_t n = rng.between(3, 10);
      const std::size_t m = capped(n, rng.between(n - 1, n + 6));
      const std::size_t parts = rng.between(1, 3);
      return {"subdivision-" + std::to_string(n) + "-" + std::to_string(m) + "-" +
                  std::to_string(parts) + "-" + std::to_string(sub),
              random_subdivision(n, m, parts, sub)};
    }
  }
}

inline std::vector<Instance> corpus(std::size_t count, std::uint64_t seed) {
  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(corpus_instance(seed, i));
  return out;
}

// --------------------------------------------------------------- solving

struct SolveRecord {
  std::size_t instance = 0;
  std::uint64_t k = 0;
  std::uint32_t d = 0;
  std::optional<Certificate> cert;
  std::string error;  // set when solve threw
  Verdict verdict;
  std::string text;  // certificate JSON
  double runtime_ms = 0;
};

inline SolveRecord solve_one(const Graph& g, std::size_t instance, std::uint64_t k, std::uint32_t d) {
  SolveRecord rec;
  rec.instance = instance;
  rec.k = k;
  rec.d = d;
  const auto start = std::chrono::steady_clock::now();
  try {
    rec.cert = solve(g, k, d);
    rec.verdict = verify(g, *rec.cert, k, d);
    rec.text = certificate_text(*rec.cert);
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.verdict = {false, rec.error};
  }
  rec.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

inline constexpr std::uint64_t kCorpusK[] = {1, 2, 3};
inline constexpr std::uint32_t kCorpusD[] = {1, 2};

/// Every instance against every (k, d) of the corpus grid, in index order.
inline std::vector<SolveRecord> solve_corpus(const std::vector<Instance>& instances, unsigned threads) {
  const std::size_t per = std::size(kCorpusK) * std::size(kCorpusD);
  return parallel_map<SolveRecord>(instances.size() * per, threads, [&](std::size_t job) {
    const std::size_t i = job / per;
    const std::size_t kd = job % per;
    return solve_one(instances[i].graph, i, kCorpusK[kd / std::size(kCorpusD)],
                     kCorpusD[kd % std::size(kCorpusD)]);
  });
}

inline std::uint64_t fingerprint(const std::vector<SolveRecord>& records) {
  std::uint64_t h = fnv1a("");
  for (const auto& r : records) h = fnv1a(r.text.empty() ? "error:" + r.error : r.text, h);
  return h;
}

inline std::string where(const std::vector<Instance>& instances, const SolveRecord& r) {
  return instances[r.instance].name + " k=" + std::to_string(r.k) + " d=" + std::to_string(r.d);
}

/// Every (instance, k, d) returned a certificate that verify() accepts.
inline Report totality(const std::vector<Instance>& instances, const std::vector<SolveRecord>& records) {
  Report rep("dichotomy totality");
  for (const auto& r : records) {
    ++rep.checked;
    if (!r.cert) rep.fail(where(instances, r) + ": solve threw: " + r.error);
    else if (!r.verdict.ok) rep.fail(where(instances, r) + ": " + r.verdict.reason);
  }
  return rep;
}

/// Hitting certificates re-checked without verify(): |X| <= f(k) and
/// G - B(X, 19d) has cycle rank 0.
inline Report hitting_bound(const std::vector<Instance>& instances, const std::vector<SolveRecord>& records) {
  Report rep("hitting bound");
  for (const auto& r : records) {
    if (!r.cert || r.cert->is_packing()) continue;
    ++rep.checked;
    const Graph& g = instances[r.instance].graph;
    const Certificate& c = *r.cert;
    if (c.radius != 19ull * r.d) rep.fail(where(instances, r) + ": radius is not 19d");
    if (BigInt(c.x.size()) > f_bound(r.k)) rep.fail(where(instances, r) + ": |X| > f(k)");
    if (cycle_rank(g.without(ball(g, c.x, 19 * r.d))) != 0) {
      rep.fail(where(instances, r) + ": G - B(X, 19d) has a cycle");
    }
  }
  return rep;
}

inline Report packing_bound(const std::vector<Instance>& instances, const std::vector<SolveRecord>& records) {
  Report rep("packing bound");
  for (const auto& r : records) {
    if (!r.cert || !r.cert->is_packing()) continue;
    ++rep.checked;
    const Graph& g = instances[r.instance].graph;
    if (r.cert->cycles.size() != r.k || !is_d_packing(g, r.cert->cycles, r.d)) {
      rep.fail(where(instances, r) + ": not a d-packing of k cycles");
    }
  }
  return rep;
}

/// On instances with at most `max_n` vertices: Packing implies the exact
/// maximum is at least k, Hitting implies the exact minimum is at most |X|.
/// `instances_checked` counts distinct graphs.
inline Report oracle_crosscheck(const std::vector<Instance>& instances,
                                const std::vector<SolveRecord>& records, std::size_t max_n,
                                std::size_t min_instances, unsigned threads) {
  Report rep("oracle cross-check");
  const OracleLimits limits = OracleLimits::from_env();
  struct Row {
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::string violation;
  };
  auto rows = parallel_map<Row>(records.size(), threads, [&](std::size_t j) {
    Row row;
    const SolveRecord& r = records[j];
    const Graph& g = instances[r.instance].graph;
    if (!r.cert || g.vertex_count() > max_n) return row;
    try {
      if (r.cert->is_packing()) {
        if (max_d_packing(g, r.d, limits) < r.k) row.violation = where(instances, r) + ": oracle packs fewer than k";
      } else if (min_ball_hitting(g, 19 * r.d, limits) > r.cert->x.size()) {
        row.violation = where(instances, r) + ": oracle needs more than |X|";
      }
      row.checked = 1;
    } catch (const OracleLimitError&) {
      row.skipped = 1;
    }
    return row;
  });
  std::vector<char> seen(instances.size(), 0);
  std::size_t skipped = 0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    rep.checked += rows[j].checked;
    skipped += rows[j].skipped;
    if (rows[j].checked) seen[records[j].instance] = 1;
    if (!rows[j].violation.empty()) rep.fail(rows[j].violation);
  }
  const auto distinct = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
  if (rep.passed) {
    rep.detail = std::to_string(distinct) + " instances, " + std::to_string(skipped) + " runs over oracle limits";
  }
  if (distinct < min_instances) {
    rep.fail("only " + std::to_string(distinct) + " instances with n <= " + std::to_string(max_n) +
             ", need " + std::to_string(min_instances));
  }
  return rep;
}

inline Report determinism(const std::vector<SolveRecord>& first, const std::vector<SolveRecord>& second) {
  Report rep("determinism");
  rep.checked = first.size();
  if (first.size() != second.size()) {
    rep.fail("runs differ in size");
    return rep;
  }
  for (std::size_t j = 0; j < first.size(); ++j) {
    if (first[j].text != second[j].text || first[j].error != second[j].error) {
      rep.fail("record " + std::to_string(j) + " differs between runs");
      return rep;
    }
  }
  const std::uint64_t a = fingerprint(first);
  const std::uint64_t b = fingerprint(second);
  if (a != b) rep.fail("fingerprints differ");
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(a));
  if (rep.passed) rep.detail = std::string("fnv1a ") + hex;
  return rep;
}

// ---------------------------------------------------------- refinement

/// short_or_unicyclic on random (G, C, r): a Unicyclic answer lies in
/// B(V(C), 2r) and its radius-r ball graph is unicyclic; a Short answer lies
/// in B(V(C), 3r) and has length <= 6r + 2.
inline Report refinement_suite(std::size_t triples, std::uint64_t seed) {
  using Tag = RefinementOutcome::Tag;
  Report rep("refinement suite");
  for (std::uint64_t attempt = 0; rep.checked < triples && attempt < 20 * triples; ++attempt) {
    Rng rng(seed + attempt);
    const std::size_t n = rng.between(5, 40);
    const std::size_t m = std::min(n * (n - 1) / 2, rng.between(n, n + n / 2 + 3));
    const Graph g = attempt % 3 == 0 ? random_subdivision(n / 3 + 3, n / 3 + 4, 2, rng.below(1u << 30))
                                     : random_gnm(n, m, rng.below(1u << 30));
    VertexSet avoid;
    for (std::size_t t = rng.below(3); t > 0; --t) avoid.insert(static_cast<Vertex>(rng.below(g.vertex_count())));
    auto c = find_cycle_avoiding(g, avoid);
    if (!c) continue;
    const auto r = static_cast<std::uint32_t>(rng.between(1, 3));
    ++rep.checked;
    const std::string at = "seed " + std::to_string(seed + attempt) + " r=" + std::to_string(r);
    std::optional<RefinementOutcome> found;
    try {
      found = short_or_unicyclic(g, *c, r);
    } catch (const std::exception& e) {
      rep.fail(at + ": threw " + e.what());
      continue;
    }
    const RefinementOutcome& out = *found;
    if (!out.cycle.is_valid_in(g)) {
      rep.fail(at + ": result is not a cycle of G");
      continue;
    }
    const bool unicyclic = out.tag == Tag::Unicyclic;
    const DistanceMap from_c = bfs_distances(g, c->vertex_set(), unicyclic ? 2 * r : 3 * r);
    for (Vertex v : out.cycle.vertices()) {
      if (!from_c[v]) rep.fail(at + ": cycle leaves the allowed ball around C");
    }
    if (!unicyclic && out.cycle.length() > 6 * r + 2) rep.fail(at + ": short cycle longer than 6r + 2");
    if (unicyclic) {
      const VertexSet near = ball(g, out.cycle.vertex_set(), r);
      std::size_t edges = 0;
      for (const Edge& e : g.edges()) edges += near.contains(e.u) && near.contains(e.v);
      // The ball graph is connected, so unicyclic means |E| = |V|.
      if (edges != near.size()) rep.fail(at + ": ball graph is not unicyclic");
    }
  }
  if (rep.checked < triples) rep.fail("only " + std::to_string(rep.checked) + " triples generated");
  return rep;
}

// ---------------------------------------------------------- Simonovits

/// Degree-{2,3} graphs with n <= max_n: find_disjoint_cycles agrees with the
/// exhaustive oracle for every k, and k disjoint cycles exist whenever there
/// are at least s(k) branch vertices.
inline Report simonovits_suite(std::size_t graphs, std::size_t max_n, std::uint64_t seed) {
  Report rep("Simonovits suite");
  std::size_t by_bound[3] = {0, 0, 0};
  std::size_t generated = 0;
  for (std::uint64_t attempt = 0; generated < graphs && attempt < 20 * graphs; ++attempt) {
    const std::size_t branch = 2 + 2 * (attempt % 8);
    const Graph g = random_subcubic(branch, attempt % 4, seed + attempt);
    if (g.vertex_count() > max_n) continue;
    ++generated;
    const std::size_t best = max_d_packing(g, 0);
    for (std::uint64_t k = 1; k <= 4; ++k) {
      ++rep.checked;
      const std::string at = "seed " + std::to_string(seed + attempt) + " k=" + std::to_string(k);
      const auto found = try_find_disjoint_cycles(g, k);
      if (found.has_value() != (best >= k)) rep.fail(at + ": disagrees with the oracle");
      if (found) {
        bool ok = found->size() == k;
        for (std::size_t a = 0; ok && a < found->size(); ++a) {
          ok = (*found)[a].is_valid_in(g);
          for (std::size_t b = 0; ok && b < a; ++b) ok = !(*found)[a].vertex_set().intersects((*found)[b].vertex_set());
        }
        if (!ok) rep.fail(at + ": cycles are not disjoint cycles of G");
      }
      if (k <= 2 && branch_vertex_count(g) >= s_bound(k)) {
        ++by_bound[k];
        if (!found) rep.fail(at + ": s(k) branch vertices but no k disjoint cycles");
      }
    }
  }
  if (rep.passed) {
    rep.detail = std::to_string(generated) + " graphs; " + std::to_string(by_bound[1]) +
                 " reach s(1), " + std::to_string(by_bound[2]) + " reach s(2)";
  }
  if (generated < graphs) rep.fail("only " + std::to_string(generated) + " graphs generated");
  return rep;
}

// --------------------------------------------------------- forest Helly

namespace detail {

inline RootedForest random_forest(Rng& rng, std::size_t n) {
  std::vector<Vertex> label(n);
  for (Vertex v = 0; v < n; ++v) label[v] = v;
  rng.shuffle(label);
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex v = 1; v < n; ++v) {
    if (rng.coin(4, 5)) e.emplace_back(label[v], label[rng.below(v)]);
  }
  return RootedForest(build_graph(n, std::span<const std::pair<Vertex, Vertex>>(e)));
}

inline VertexSet random_subtree(Rng& rng, const RootedForest& f, std::size_t size) {
  VertexSet s{static_cast<Vertex>(rng.below(f.vertex_count()))};
  for (std::size_t tries = 0; s.size() < size && tries < 4 * size; ++tries) {
    const Vertex from = s.members()[rng.below(s.size())];
    auto nbrs = f.graph().neighbors(from);
    if (nbrs.empty()) break;
    s.insert(nbrs[rng.below(nbrs.size())]);
  }
  return s;
}

inline std::size_t brute_max_independent(const std::vector<ForestTuple>& ts) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << ts.size()); ++mask) {
    bool ok = true;
    for (std::size_t a = 0; a < ts.size() && ok; ++a) {
      if (!(mask >> a & 1)) continue;
      for (std::size_t b = 0; b < a && ok; ++b) {
        if (mask >> b & 1) ok = tuples_independent(ts[a], ts[b]);
      }
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(mask)));
  }
  return best;
}

}  // namespace detail

/// Random tuple families over c forests of total size <= 12, and single-forest
/// subgraph families with members of <= c components. Pack answers must be
/// independent, Hit answers must cover within ell(k,c) resp. ell*(k,c), and
/// for c = 1 the answer must be exact with Hit size <= k - 1.
inline Report helly_suite(std::size_t families, std::uint64_t seed) {
  Report rep("forest-Helly suite");
  for (std::uint64_t f = 0; f < families; ++f) {
    Rng rng(seed + f);
    const std::size_t c = 1 + f % 3;
    const std::uint64_t k = rng.between(1, 3);
    const std::size_t count = rng.between(1, 8);
    const std::string at = "family " + std::to_string(f) + " c=" + std::to_string(c) + " k=" + std::to_string(k);
    std::vector<ForestTuple> ts;
    PackOrHitResult r;
    BigInt budget;
    std::vector<VertexSet> subs;
    if (f % 2 == 0) {
      std::vector<RootedForest> forests;
      std::size_t left = 12;
      for (std::size_t i = 0; i < c; ++i) {
        const std::size_t size = 2 + rng.below(std::min<std::size_t>(left - 2 * (c - i - 1) - 1, 5));
        left -= size;
        forests.push_back(detail::random_forest(rng, size));
      }
      while (ts.size() < count) {
        ForestTuple t(c);
        for (std::size_t i = 0; i < c; ++i) {
          if (rng.coin(2, 3)) t[i] = detail::random_subtree(rng, forests[i], rng.between(1, 3));
        }
        if (std::ranges::any_of(t, [](const auto& e) { return e.has_value(); })) ts.push_back(std::move(t));
      }
      r = tuples_pack_or_hit(forests, ts, k);
      budget = budgets(k, c).ell;
    } else {
      RootedForest forest = detail::random_forest(rng, rng.between(4, 12));
      while (subs.size() < count) {
        VertexSet s;
        for (std::size_t part = rng.between(1, c); part > 0; --part) {
          s.insert_all(detail::random_subtree(rng, forest, rng.between(1, 3)));
        }
        if (forest.components_of(s) > c) continue;
        ts.push_back({s});
        subs.push_back(std::move(s));
      }
      r = subgraphs_pack_or_hit(forest, subs, k, c);
      budget = budgets(k, c).ell_star;
    }
    ++rep.checked;
    const std::size_t best = detail::brute_max_independent(ts);
    if (r.is_pack()) {
      bool ok = r.pack.size() == k;
      for (std::size_t a = 0; ok && a < r.pack.size(); ++a) {
        for (std::size_t b = 0; ok && b < a; ++b) ok = tuples_independent(ts[r.pack[a]], ts[r.pack[b]]);
      }
      if (!ok) rep.fail(at + ": Pack answer is not independent");
    } else {
      std::vector<VertexSet> hit = r.hit;
      if (!subs.empty()) hit.resize(1);
      for (const auto& t : ts) {
        if (!tuple_is_hit(t, hit)) rep.fail(at + ": Hit misses a member");
      }
      if (BigInt(r.hit_size()) > budget) rep.fail(at + ": Hit exceeds its budget");
      if (c == 1 && r.hit_size() > k - 1) rep.fail(at + ": c = 1 Hit larger than k - 1");
    }
    if (c == 1 && r.is_pack() != (best >= k)) rep.fail(at + ": c = 1 answer is not exact");
  }
  return rep;
}

// -------------------------------------------------------------- budgets

inline constexpr char kEllStar23[] = "418039160";
inline constexpr char kF1[] = "418039166";
inline constexpr char kF2[] = "23260633646591917709389690692";
inline constexpr char kF3[] = "1832060833930778606440879439186834";

inline Report budget_regression() {
  Report rep("budget regression");
  auto expect = [&](const std::string& what, const BigInt& got, const BigInt& want) {
    ++rep.checked;
    if (got != want) rep.fail(what + " = " + got.str() + ", pinned " + want.str());
  };
  const Budgets b21 = budgets(2, 1);
  expect("ell(2,1)", b21.ell, 1);
  expect("ell*(2,1)", b21.ell_star, 1);
  expect("ell*(2,3)", budgets(2, 3).ell_star, BigInt(kEllStar23));
  expect("f(1)", f_bound(1), BigInt(kF1));
  expect("f(2)", f_bound(2), BigInt(kF2));
  expect("f(3)", f_bound(3), BigInt(kF3));
  return rep;
}

}  // namespace coarse_ep::suites

#endif  // COARSE_EP_SUITES_HPP
