#ifndef COARSE_EP_FOREST_HELLY_HPP
#define COARSE_EP_FOREST_HELLY_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "coarse_ep/graph.hpp"
#include "coarse_ep/metric.hpp"

namespace coarse_ep {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------- budgets

/// Largest c accepted by the budget recurrences; beyond it the numbers run to
/// megabytes.
inline constexpr std::size_t kMaxHellyWidth = 8;

namespace detail {

inline BigInt binomial(const BigInt& n, std::size_t r) {
  if (n < r) return 0;
  BigInt out = 1;
  for (std::size_t i = 0; i < r; ++i) {
    out *= n - i;
    out /= i + 1;
  }
  return out;
}

inline BigInt ell(const BigInt& k, std::size_t c) {
  if (c == 0) return 0;
  if (c == 1) return k - 1;
  return k + ell(2 * boost::multiprecision::pow(k, static_cast<unsigned>(c)), c - 1);
}

inline BigInt ell_star(const BigInt& k, std::size_t c) {
  if (c == 1) return k - 1;
  const BigInt pairs = c * (c - 1) / 2;
  const BigInt prev = ell_star(k, c - 1);
  return pairs * prev + binomial(1 + 2 * pairs * prev, c) * ell(k, c);
}

inline void check_budget_args(const BigInt& k, std::size_t c) {
  require(k >= 1, "budgets need k >= 1");
  require(c >= 1, "budgets need c >= 1");
  require(c <= kMaxHellyWidth, "budgets are limited to c <= " + std::to_string(kMaxHellyWidth));
}

}  // namespace detail

struct Budgets {
  BigInt ell;       // tuples of c forests, summed over the forests
  BigInt ell_star;  // subgraphs with at most c components
};

/// ell(k,0) = 0, ell(k,1) = k-1, ell(k,c) = k + ell(2k^c, c-1);
/// ell*(k,1) = k-1, ell*(k,c) = C(c,2) ell*(k,c-1) + C(1 + 2 C(c,2) ell*(k,c-1), c) ell(k,c).
inline Budgets budgets(const BigInt& k, std::size_t c) {
  detail::check_budget_args(k, c);
  return {detail::ell(k, c), detail::ell_star(k, c)};
}

// ---------------------------------------------------------------- forests

/// A forest with one root per component, parent pointers and the post-order
/// sigma (children in ascending id, roots in ascending id), so every subtree
/// precedes its root.
class RootedForest {
 public:
  RootedForest() = default;

  /// Roots default to the minimum id of each component.
  explicit RootedForest(Graph g, std::vector<Vertex> roots = {}) : graph_(std::move(g)) {
    const std::size_t n = graph_.vertex_count();
    detail::require(is_forest(graph_), "rooted forest: graph has a cycle");
    const auto labels = component_labels(graph_);
    std::size_t components = 0;
    for (auto label : labels) components = std::max<std::size_t>(components, label + 1);
    if (roots.empty()) {
      std::vector<char> seen(components, 0);
      for (Vertex v = 0; v < n; ++v) {
        if (!seen[labels[v]]) {
          seen[labels[v]] = 1;
          roots.push_back(v);
        }
      }
    } else {
      std::vector<char> seen(components, 0);
      for (Vertex r : roots) {
        detail::require(r < n, "rooted forest: root " + std::to_string(r) + " out of range");
        detail::require(!seen[labels[r]], "rooted forest: two roots in one component");
        seen[labels[r]] = 1;
      }
      detail::require(roots.size() == components, "rooted forest: a component has no root");
    }
    std::sort(roots.begin(), roots.end());
    roots_ = std::move(roots);

    parent_.assign(n, std::nullopt);
    children_.assign(n, {});
    depth_.assign(n, 0);
    std::vector<Vertex> stack;
    for (Vertex r : roots_) {
      stack.push_back(r);
      while (!stack.empty()) {
        const Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : graph_.neighbors(u)) {
          if (parent_[u] && *parent_[u] == w) continue;
          parent_[w] = u;
          depth_[w] = depth_[u] + 1;
          children_[u].push_back(w);
          stack.push_back(w);
        }
      }
    }
    position_.assign(n, 0);
    std::vector<std::pair<Vertex, std::size_t>> frames;
    for (Vertex r : roots_) {
      frames.emplace_back(r, 0);
      while (!frames.empty()) {
        auto& [u, next] = frames.back();
        if (next < children_[u].size()) {
          const Vertex w = children_[u][next++];
          frames.emplace_back(w, 0);
          continue;
        }
        position_[u] = order_.size();
        order_.push_back(u);
        frames.pop_back();
      }
    }
  }

  const Graph& graph() const { return graph_; }
  std::size_t vertex_count() const { return graph_.vertex_count(); }
  const std::vector<Vertex>& roots() const { return roots_; }
  std::optional<Vertex> parent(Vertex v) const { return parent_.at(v); }
  const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }
  std::uint32_t depth(Vertex v) const { return depth_.at(v); }
  /// sigma: post-order.
  const std::vector<Vertex>& order() const { return order_; }
  std::size_t position(Vertex v) const { return position_.at(v); }

  /// Number of components of F[s].
  std::size_t components_of(const VertexSet& s) const {
    std::size_t count = 0;
    for (Vertex v : s) count += !(parent_[v] && s.contains(*parent_[v]));
    return count;
  }

  bool is_connected(const VertexSet& s) const { return !s.empty() && components_of(s) == 1; }

  /// The vertex of a connected set closest to the root.
  Vertex top(const VertexSet& s) const {
    detail::require(!s.empty(), "top of an empty set");
    Vertex best = s.min();
    for (Vertex v : s) {
      if (depth_[v] < depth_[best]) best = v;
    }
    return best;
  }

  /// Components of F[s], ordered by minimum id.
  std::vector<VertexSet> component_parts(const VertexSet& s) const {
    std::vector<Vertex> by_depth(s.begin(), s.end());
    std::stable_sort(by_depth.begin(), by_depth.end(),
                     [&](Vertex a, Vertex b) { return depth_[a] < depth_[b]; });
    std::vector<std::vector<Vertex>> parts;
    std::vector<std::size_t> label(vertex_count(), 0);
    for (Vertex v : by_depth) {
      if (parent_[v] && s.contains(*parent_[v])) {
        label[v] = label[*parent_[v]];
      } else {
        label[v] = parts.size();
        parts.emplace_back();
      }
      parts[label[v]].push_back(v);
    }
    std::vector<VertexSet> out;
    for (auto& p : parts) out.emplace_back(std::move(p));
    std::sort(out.begin(), out.end(),
              [](const VertexSet& a, const VertexSet& b) { return a.min() < b.min(); });
    return out;
  }

  /// Vertices of the tree path from a to b.
  std::vector<Vertex> path(Vertex a, Vertex b) const {
    std::vector<Vertex> up;
    std::vector<Vertex> down;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        up.push_back(a);
        detail::require(parent_[a].has_value(), "path between different components");
        a = *parent_[a];
      } else {
        down.push_back(b);
        detail::require(parent_[b].has_value(), "path between different components");
        b = *parent_[b];
      }
    }
    up.push_back(a);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
  }

 private:
  Graph graph_;
  std::vector<Vertex> roots_;
  std::vector<std::optional<Vertex>> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<std::uint32_t> depth_;
  std::vector<Vertex> order_;
  std::vector<std::size_t> position_;
};

// ---------------------------------------------------------------- tuples

/// Entry i is a connected vertex set of forest i, or nullopt for the null graph.
using ForestTuple = std::vector<std::optional<VertexSet>>;

inline bool tuples_independent(const ForestTuple& a, const ForestTuple& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] && b[i] && a[i]->intersects(*b[i])) return false;
  }
  return true;
}

inline bool tuple_is_hit(const ForestTuple& a, const std::vector<VertexSet>& hit) {
  for (std::size_t i = 0; i < a.size() && i < hit.size(); ++i) {
    if (a[i] && a[i]->intersects(hit[i])) return true;
  }
  return false;
}

struct PackOrHitResult {
  enum class Tag { Pack, Hit };
  Tag tag = Tag::Hit;
  std::vector<std::size_t> pack;  // indices into the input
  std::vector<VertexSet> hit;     // one set per forest; a single set for subgraphs
  BigInt budget;

  bool is_pack() const { return tag == Tag::Pack; }
  std::size_t hit_size() const {
    std::size_t total = 0;
    for (const auto& x : hit) total += x.size();
    return total;
  }
};

enum class HellyVariant { Refined, Coarse };

namespace detail {

// Independent-representative selection over coordinates [lo, hi) of `store`.
inline std::vector<std::vector<std::size_t>> select_rec(std::span<const RootedForest* const> forests,
                                                        std::size_t lo, std::size_t hi,
                                                        const std::vector<ForestTuple>& store,
                                                        std::vector<std::vector<std::size_t>> families,
                                                        std::vector<BigInt> targets) {
  const std::size_t m = families.size();
  std::vector<std::vector<std::size_t>> out(m);
  BigInt k = 0;
  std::size_t positive = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (targets[j] > 0) {
      k += targets[j];
      ++positive;
    }
  }
  if (k == 0) return out;
  const std::size_t width = hi - lo;
  const BigInt need = boost::multiprecision::pow(BigInt(positive), static_cast<unsigned>(width - 1)) * k;
  for (std::size_t j = 0; j < m; ++j) {
    ensure(targets[j] == 0 || families[j].size() >= need,
           "independent selection: family " + std::to_string(j) + " shrank below its requirement");
  }

  if (width == 1) {
    const RootedForest& f = *forests[lo];
    // Earliest top in sigma; a null entry stands for a fresh isolated vertex.
    auto key = [&](std::size_t t) -> std::int64_t {
      const auto& e = store[t][lo];
      return e ? static_cast<std::int64_t>(f.position(f.top(*e))) : -1;
    };
    while (true) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      std::int64_t best_key = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (targets[j] == 0) continue;
        ensure(!families[j].empty(), "independent selection ran out of tuples");
        for (std::size_t p = 0; p < families[j].size(); ++p) {
          const std::int64_t kk = key(families[j][p]);
          if (!best || kk < best_key) {
            best = std::make_pair(j, p);
            best_key = kk;
          }
        }
      }
      if (!best) break;
      const std::size_t pick = families[best->first][best->second];
      out[best->first].push_back(pick);
      targets[best->first] -= 1;
      const auto& e = store[pick][lo];
      const std::optional<Vertex> v = e ? std::optional<Vertex>(f.top(*e)) : std::nullopt;
      for (auto& fam : families) {
        std::erase_if(fam, [&](std::size_t u) {
          return u == pick || (v && store[u][lo] && store[u][lo]->contains(*v));
        });
      }
    }
    return out;
  }

  const BigInt y = boost::multiprecision::pow(BigInt(positive), static_cast<unsigned>(width - 2)) * k;
  std::vector<BigInt> first_targets(m);
  for (std::size_t j = 0; j < m; ++j) first_targets[j] = targets[j] > 0 ? y : BigInt(0);
  auto first = select_rec(forests, lo, lo + 1, store, std::move(families), std::move(first_targets));
  return select_rec(forests, lo + 1, hi, store, std::move(first), std::move(targets));
}

inline void check_tuple_shape(std::span<const RootedForest* const> forests, const ForestTuple& t,
                              const std::string& name, bool need_non_trivial) {
  require(t.size() == forests.size(), name + " has " + std::to_string(t.size()) +
                                          " entries, expected " + std::to_string(forests.size()));
  bool any = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t[i]) continue;
    any = true;
    for (Vertex v : *t[i]) {
      require(v < forests[i]->vertex_count(),
              name + ": vertex " + std::to_string(v) + " outside forest " + std::to_string(i));
    }
    require(forests[i]->is_connected(*t[i]),
            name + ": entry " + std::to_string(i) + " is not connected");
  }
  require(any || !need_non_trivial, name + " is trivial");
}

// ---------------------------------------------------------------- binarization

// A forest made into one binary tree: a virtual root above every component
// root, a fresh vertex for each null entry, and a left-leaning caterpillar of
// virtual nodes below every vertex with more than two children.
struct PreparedForest {
  enum class Kind { Real, Null, Root };
  struct Owner {
    Kind kind;
    std::size_t value;  // vertex for Real, tuple index for Null
  };

  RootedForest tree;
  std::size_t original = 0;
  std::vector<Owner> owner;
  std::vector<std::vector<Vertex>> internals;  // caterpillar nodes owned by each non-virtual id
  std::vector<Vertex> null_vertex;             // stand-in per entry of null_tuples

  VertexSet image(const VertexSet& s) const {
    std::vector<Vertex> out;
    for (Vertex v : s) {
      out.push_back(v);
      out.insert(out.end(), internals[v].begin(), internals[v].end());
    }
    return VertexSet(std::move(out));
  }
};

inline PreparedForest prepare_forest(const RootedForest& f, const std::vector<std::size_t>& null_tuples) {
  PreparedForest p;
  const std::size_t n = f.vertex_count();
  const std::size_t q = null_tuples.size();
  p.original = n;
  for (Vertex v = 0; v < n; ++v) p.owner.push_back({PreparedForest::Kind::Real, v});
  for (std::size_t i = 0; i < q; ++i) {
    p.null_vertex.push_back(static_cast<Vertex>(n + i));
    p.owner.push_back({PreparedForest::Kind::Null, null_tuples[i]});
  }
  const Vertex root = static_cast<Vertex>(n + q);
  p.owner.push_back({PreparedForest::Kind::Root, 0});
  p.internals.assign(n + q + 1, {});

  std::vector<Edge> edges;
  auto attach = [&](Vertex x, const std::vector<Vertex>& kids) {
    Vertex cur = x;
    std::size_t i = 0;
    while (kids.size() - i > 2) {
      edges.emplace_back(cur, kids[i++]);
      const Vertex w = static_cast<Vertex>(p.owner.size());
      p.owner.push_back(p.owner[x]);
      p.internals[x].push_back(w);
      edges.emplace_back(cur, w);
      cur = w;
    }
    for (; i < kids.size(); ++i) edges.emplace_back(cur, kids[i]);
  };
  for (Vertex v = 0; v < n; ++v) attach(v, f.children(v));
  std::vector<Vertex> top(f.roots().begin(), f.roots().end());
  top.insert(top.end(), p.null_vertex.begin(), p.null_vertex.end());
  attach(root, top);
  p.tree = RootedForest(Graph::from_edges(p.owner.size(), std::move(edges)), {root});
  return p;
}

// ---------------------------------------------------------------- tuples core

// Tuples over prepared trees: every entry non-null and connected.
using CoreTuple = std::vector<VertexSet>;

struct CoreResult {
  bool pack = false;
  std::vector<std::size_t> chosen;
  std::vector<VertexSet> hit;
  BigInt bound;  // coarse subgraph variant only: |X0| + ell(k, m)
};

inline bool core_independent(const CoreTuple& a, const CoreTuple& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].intersects(b[i])) return false;
  }
  return true;
}

inline bool core_less(const CoreTuple& a, const CoreTuple& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [](const VertexSet& x, const VertexSet& y) { return x.members() < y.members(); });
}

inline void dedupe(std::vector<CoreTuple>& ts) {
  std::sort(ts.begin(), ts.end(), core_less);
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

inline void unite_into(std::vector<VertexSet>& into, const std::vector<VertexSet>& from) {
  for (std::size_t i = 0; i < into.size(); ++i) into[i].insert_all(from[i]);
}

// Families at most this large are searched exhaustively when the recursive
// test answers Hit.
inline constexpr std::size_t kExhaustiveTuples = 12;

inline std::optional<std::vector<std::size_t>> find_independent(const std::vector<CoreTuple>& ts,
                                                                std::size_t want) {
  std::vector<std::size_t> pick;
  std::function<bool(std::size_t)> go = [&](std::size_t from) {
    if (pick.size() == want) return true;
    if (ts.size() - from < want - pick.size()) return false;
    for (std::size_t i = from; i < ts.size(); ++i) {
      if (!std::ranges::all_of(pick, [&](std::size_t p) { return core_independent(ts[p], ts[i]); })) {
        continue;
      }
      pick.push_back(i);
      if (go(i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  if (go(0)) return pick;
  return std::nullopt;
}

inline CoreResult core_pack_or_hit(std::span<const RootedForest* const> trees,
                                   const std::vector<CoreTuple>& tuples, const BigInt& k);

struct TestOutcome {
  bool qualifies = false;
  std::vector<CoreTuple> packed;
  std::vector<VertexSet> hit;
};

// Does `family` contain `want` pairwise independent tuples? A no always comes
// with a hitting set of the whole family.
inline TestOutcome independence_test(std::span<const RootedForest* const> trees,
                                     const std::vector<CoreTuple>& family, const BigInt& want) {
  TestOutcome out;
  out.hit.assign(trees.size(), {});
  if (family.size() < want) {
    for (const auto& t : family) out.hit[0].insert(t[0].min());
    return out;
  }
  CoreResult r = core_pack_or_hit(trees, family, want);
  if (r.pack) {
    out.qualifies = true;
    for (std::size_t i : r.chosen) out.packed.push_back(family[i]);
    return out;
  }
  if (family.size() <= kExhaustiveTuples) {
    if (auto found = find_independent(family, static_cast<std::size_t>(want))) {
      out.qualifies = true;
      for (std::size_t i : *found) out.packed.push_back(family[i]);
      return out;
    }
  }
  out.hit = std::move(r.hit);
  return out;
}

inline CoreResult core_pack_or_hit(std::span<const RootedForest* const> trees,
                                   const std::vector<CoreTuple>& tuples, const BigInt& k) {
  const std::size_t c = trees.size();
  CoreResult out;
  out.hit.assign(c, {});
  if (tuples.empty()) return out;
  if (k == 1) {
    out.pack = true;
    out.chosen = {0};
    return out;
  }
  const RootedForest& f1 = *trees.front();
  const std::size_t n1 = f1.vertex_count();
  const auto rest = trees.subspan(1);

  std::vector<std::vector<std::size_t>> by_top(n1);
  std::vector<std::vector<std::size_t>> containing(n1);
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    by_top[f1.top(tuples[t][0])].push_back(t);
    for (Vertex v : tuples[t][0]) containing[v].push_back(t);
  }
  std::vector<char> removed(n1, 0);
  std::vector<char> dead(tuples.size(), 0);

  // B(v): live tuples whose first entry lies in the current subtree of v.
  auto members_below = [&](Vertex v) {
    std::vector<std::size_t> found;
    std::vector<Vertex> stack{v};
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (std::size_t t : by_top[u]) {
        if (!dead[t]) found.push_back(t);
      }
      for (Vertex w : f1.children(u)) {
        if (!removed[w]) stack.push_back(w);
      }
    }
    std::sort(found.begin(), found.end());
    return found;
  };
  auto project = [&](const std::vector<std::size_t>& ids) {
    std::vector<CoreTuple> out_family;
    for (std::size_t t : ids) out_family.emplace_back(tuples[t].begin() + 1, tuples[t].end());
    dedupe(out_family);
    return out_family;
  };

  const BigInt want = c >= 2 ? BigInt(boost::multiprecision::pow(k, static_cast<unsigned>(c - 1))) : BigInt(1);
  std::vector<Vertex> chosen_v;
  std::vector<std::vector<std::size_t>> chosen_b;
  std::vector<std::vector<CoreTuple>> chosen_d;
  std::vector<CoreTuple> e_family;
  std::vector<VertexSet> e_hits(c > 1 ? c - 1 : 0);
  std::vector<std::optional<std::vector<VertexSet>>> last_hit(n1);

  const auto& sigma = f1.order();
  for (std::size_t pos = 0; pos < sigma.size() && BigInt(chosen_v.size()) < k; ++pos) {
    const Vertex v = sigma[pos];
    auto b = members_below(v);
    TestOutcome test;
    if (c == 1) {
      test.qualifies = !b.empty();
    } else if (b.empty()) {
      test.hit.assign(c - 1, {});
    } else {
      test = independence_test(rest, project(b), want);
    }
    if (!test.qualifies) {
      if (c > 1) last_hit[v] = std::move(test.hit);
      continue;
    }
    if (c > 1) {
      for (Vertex u : f1.children(v)) {
        if (removed[u]) continue;
        ensure(last_hit[u].has_value(), "tuple scan: child of a chosen vertex was never tested");
        auto part = project(members_below(u));
        e_family.insert(e_family.end(), part.begin(), part.end());
        unite_into(e_hits, *last_hit[u]);
      }
    }
    removed[v] = 1;
    for (std::size_t t : containing[v]) dead[t] = 1;
    chosen_v.push_back(v);
    chosen_b.push_back(std::move(b));
    chosen_d.push_back(std::move(test.packed));
  }

  if (BigInt(chosen_v.size()) == k) {
    out.pack = true;
    if (c == 1) {
      for (const auto& b : chosen_b) out.chosen.push_back(b.front());
    } else {
      std::vector<ForestTuple> store;
      std::vector<std::vector<std::size_t>> families(chosen_d.size());
      for (std::size_t z = 0; z < chosen_d.size(); ++z) {
        for (const auto& d : chosen_d[z]) {
          families[z].push_back(store.size());
          store.emplace_back(d.begin(), d.end());
        }
      }
      auto picked = select_rec(rest, 0, c - 1, store, std::move(families),
                               std::vector<BigInt>(chosen_d.size(), 1));
      for (std::size_t z = 0; z < picked.size(); ++z) {
        ensure(picked[z].size() == 1, "tuple scan: selection missed a family");
        const ForestTuple& d = store[picked[z].front()];
        auto match = std::ranges::find_if(chosen_b[z], [&](std::size_t t) {
          for (std::size_t i = 1; i < c; ++i) {
            if (tuples[t][i] != *d[i - 1]) return false;
          }
          return true;
        });
        ensure(match != chosen_b[z].end(), "tuple scan: selected projection has no preimage");
        out.chosen.push_back(*match);
      }
    }
    for (std::size_t a = 0; a < out.chosen.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        ensure(core_independent(tuples[out.chosen[a]], tuples[out.chosen[b]]),
               "tuple pack is not independent");
      }
    }
    return out;
  }

  out.hit[0] = VertexSet(std::vector<Vertex>(chosen_v.begin(), chosen_v.end()));
  if (c > 1) {
    const Vertex root = sigma.back();
    if (chosen_v.empty() || chosen_v.back() != root) {
      ensure(last_hit[root].has_value(), "tuple scan: root was never tested");
      auto part = project(members_below(root));
      e_family.insert(e_family.end(), part.begin(), part.end());
      unite_into(e_hits, *last_hit[root]);
    }
    dedupe(e_family);
    const BigInt next_k = 2 * boost::multiprecision::pow(k, static_cast<unsigned>(c));
    CoreResult r = core_pack_or_hit(rest, e_family, next_k);
    // The independence tests are only one-sided, so the recursive call may
    // pack; the stored hits of the tested subtrees then cover the same family.
    const std::vector<VertexSet>& tail = r.pack ? e_hits : r.hit;
    for (std::size_t i = 1; i < c; ++i) out.hit[i] = tail[i - 1];
  }
  for (const auto& t : tuples) {
    bool hit = false;
    for (std::size_t i = 0; i < c && !hit; ++i) hit = t[i].intersects(out.hit[i]);
    ensure(hit, "tuple hitting set misses a tuple");
  }
  std::size_t total = 0;
  for (const auto& x : out.hit) total += x.size();
  ensure(BigInt(total) <= ell(k, c), "tuple hitting set exceeds ell(k,c)");
  return out;
}

inline PackOrHitResult tuples_pack_or_hit_impl(std::span<const RootedForest* const> forests,
                                               const std::vector<ForestTuple>& tuples,
                                               const BigInt& k) {
  const std::size_t c = forests.size();
  check_budget_args(k, c);
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    check_tuple_shape(forests, tuples[t], "tuple " + std::to_string(t), true);
  }
  std::vector<PreparedForest> prepared;
  for (std::size_t i = 0; i < c; ++i) {
    std::vector<std::size_t> nulls;
    for (std::size_t t = 0; t < tuples.size(); ++t) {
      if (!tuples[t][i]) nulls.push_back(t);
    }
    prepared.push_back(prepare_forest(*forests[i], nulls));
  }
  std::vector<const RootedForest*> trees;
  for (const auto& p : prepared) trees.push_back(&p.tree);
  std::vector<std::size_t> null_cursor(c, 0);
  std::vector<CoreTuple> core;
  for (const auto& t : tuples) {
    CoreTuple ct;
    for (std::size_t i = 0; i < c; ++i) {
      ct.push_back(t[i] ? prepared[i].image(*t[i])
                        : VertexSet{prepared[i].null_vertex[null_cursor[i]++]});
    }
    core.push_back(std::move(ct));
  }

  PackOrHitResult result;
  result.budget = ell(k, c);
  CoreResult r = core_pack_or_hit(trees, core, k);
  if (r.pack) {
    result.tag = PackOrHitResult::Tag::Pack;
    result.pack = std::move(r.chosen);
    std::sort(result.pack.begin(), result.pack.end());
    ensure(BigInt(result.pack.size()) == k, "tuple pack has the wrong size");
    for (std::size_t a = 0; a < result.pack.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        ensure(tuples_independent(tuples[result.pack[a]], tuples[result.pack[b]]),
               "tuple pack is not independent after unbinarizing");
      }
    }
    return result;
  }
  result.hit.assign(c, {});
  for (std::size_t i = 0; i < c; ++i) {
    for (Vertex x : r.hit[i]) {
      const auto& who = prepared[i].owner[x];
      if (who.kind == PreparedForest::Kind::Real) {
        result.hit[i].insert(static_cast<Vertex>(who.value));
      } else if (who.kind == PreparedForest::Kind::Null) {
        // A stand-in only meets its own tuple; trade it for a real vertex of
        // another entry of that tuple.
        const ForestTuple& t = tuples[who.value];
        std::size_t j = 0;
        while (j < c && (j == i || !t[j])) ++j;
        ensure(j < c, "null stand-in in a trivial tuple");
        result.hit[j].insert(t[j]->min());
      }
    }
  }
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    ensure(tuple_is_hit(tuples[t], result.hit), "tuple " + std::to_string(t) + " not hit");
  }
  ensure(BigInt(result.hit_size()) <= result.budget, "tuple hit exceeds ell(k,c)");
  return result;
}

// ---------------------------------------------------------------- subgraphs core

inline CoreResult subgraphs_core(const RootedForest& t, const std::vector<VertexSet>& subs,
                                 const BigInt& k, std::size_t c, HellyVariant variant) {
  CoreResult out;
  out.hit.assign(1, {});
  if (subs.empty()) return out;
  if (k == 1) {
    out.pack = true;
    out.chosen = {0};
    return out;
  }
  const RootedForest* self[] = {&t};
  if (c == 1) {
    std::vector<CoreTuple> tuples;
    for (const auto& a : subs) tuples.push_back({a});
    CoreResult r = core_pack_or_hit(self, tuples, k);
    r.bound = ell(k, 1);
    return r;
  }

  VertexSet x0;
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      std::vector<VertexSet> joined;
      for (const auto& a : subs) {
        auto parts = t.component_parts(a);
        if (j >= parts.size()) {
          joined.push_back(a);
          continue;
        }
        auto p = t.path(parts[i].min(), parts[j].min());
        joined.push_back(VertexSet::unite(a, VertexSet(std::move(p))));
      }
      CoreResult r = subgraphs_core(t, joined, k, c - 1, variant);
      if (r.pack) return r;
      x0.insert_all(r.hit[0]);
    }
  }

  // Components of F - X0, labelled top-down.
  const std::size_t n = t.vertex_count();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, kNone);
  std::vector<Vertex> comp_root;
  for (auto it = t.order().rbegin(); it != t.order().rend(); ++it) {
    const Vertex v = *it;
    if (x0.contains(v)) continue;
    const auto p = t.parent(v);
    if (p && !x0.contains(*p)) {
      label[v] = label[*p];
    } else {
      label[v] = comp_root.size();
      comp_root.push_back(v);
    }
  }
  const std::size_t m = comp_root.size();
  ensure(m <= 1 + 2 * x0.size(), "removing X0 left too many components");

  std::vector<std::size_t> alive;
  std::vector<std::vector<std::size_t>> spans;
  for (std::size_t a = 0; a < subs.size(); ++a) {
    if (subs[a].intersects(x0)) continue;
    std::vector<std::size_t> s;
    for (Vertex v : subs[a]) s.push_back(label[v]);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    ensure(s.size() == t.components_of(subs[a]) && s.size() <= c,
           "a member splits inside one component of F - X0");
    alive.push_back(a);
    spans.push_back(std::move(s));
  }

  // One tuple instance over the components listed in `group`.
  auto solve_group = [&](const std::vector<std::size_t>& group, const std::vector<std::size_t>& members,
                         CoreResult& acc) -> bool {
    std::vector<std::vector<Vertex>> local_to_global(group.size());
    std::vector<Vertex> local(n, 0);
    std::vector<std::size_t> slot(m, kNone);
    for (std::size_t g = 0; g < group.size(); ++g) slot[group[g]] = g;
    for (Vertex v = 0; v < n; ++v) {
      if (label[v] == kNone || slot[label[v]] == kNone) continue;
      auto& list = local_to_global[slot[label[v]]];
      local[v] = static_cast<Vertex>(list.size());
      list.push_back(v);
    }
    std::vector<RootedForest> parts;
    for (std::size_t g = 0; g < group.size(); ++g) {
      std::vector<Edge> edges;
      for (Vertex v : local_to_global[g]) {
        if (auto p = t.parent(v); p && label[*p] == group[g]) edges.emplace_back(local[v], local[*p]);
      }
      parts.emplace_back(Graph::from_edges(local_to_global[g].size(), std::move(edges)),
                         std::vector<Vertex>{local[comp_root[group[g]]]});
    }
    std::vector<const RootedForest*> ptrs;
    for (const auto& p : parts) ptrs.push_back(&p);
    std::vector<ForestTuple> tuples;
    for (std::size_t a : members) {
      ForestTuple tuple(group.size());
      for (Vertex v : subs[a]) {
        const std::size_t g = slot[label[v]];
        if (!tuple[g]) tuple[g] = VertexSet{};
        tuple[g]->insert(local[v]);
      }
      tuples.push_back(std::move(tuple));
    }
    PackOrHitResult r = tuples_pack_or_hit_impl(ptrs, tuples, k);
    if (r.is_pack()) {
      acc.pack = true;
      acc.chosen.clear();
      for (std::size_t i : r.pack) acc.chosen.push_back(members[i]);
      return true;
    }
    for (std::size_t g = 0; g < group.size(); ++g) {
      for (Vertex x : r.hit[g]) acc.hit[0].insert(local_to_global[g][x]);
    }
    return false;
  };

  CoreResult acc;
  acc.hit.assign(1, {});
  if (variant == HellyVariant::Coarse) {
    require(m <= kMaxHellyWidth, "coarse variant needs at most " + std::to_string(kMaxHellyWidth) +
                                     " components after removing X0, got " + std::to_string(m));
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;
    if (!alive.empty() && solve_group(all, alive, acc)) return acc;
  } else {
    // Only the component sets I needed to cover the surviving members are
    // visited; each is padded to a member of C([m], min(c, m)).
    const std::size_t width = std::min(c, m);
    std::vector<char> covered(alive.size(), 0);
    for (std::size_t a = 0; a < alive.size(); ++a) {
      if (covered[a]) continue;
      std::vector<std::size_t> group = spans[a];
      for (std::size_t i = 0; group.size() < width; ++i) {
        if (!std::ranges::binary_search(spans[a], i)) group.push_back(i);
      }
      std::sort(group.begin(), group.end());
      std::vector<std::size_t> members;
      for (std::size_t b = 0; b < alive.size(); ++b) {
        if (std::ranges::includes(group, spans[b])) {
          members.push_back(alive[b]);
          covered[b] = 1;
        }
      }
      if (solve_group(group, members, acc)) return acc;
    }
  }
  out.hit[0] = VertexSet::unite(x0, acc.hit[0]);
  for (const auto& a : subs) ensure(a.intersects(out.hit[0]), "subgraph hitting set misses a member");
  if (variant == HellyVariant::Refined) {
    ensure(BigInt(out.hit[0].size()) <= ell_star(k, c), "subgraph hitting set exceeds ell*(k,c)");
  } else {
    out.bound = BigInt(x0.size()) + ell(k, m);
    ensure(BigInt(out.hit[0].size()) <= out.bound, "subgraph hitting set exceeds |X0| + ell(k,m)");
  }
  return out;
}

}  // namespace detail

/// For each family j, targets[j] of its tuples such that all picks together
/// are pairwise independent. Families must be independent, and each family
/// with a positive target needs at least m^(c-1) * k tuples, where m counts
/// the families with positive target and k is the sum of targets.
inline std::vector<std::vector<std::size_t>> select_independent(
    const std::vector<RootedForest>& forests, const std::vector<std::vector<ForestTuple>>& families,
    const std::vector<std::uint64_t>& targets) {
  const std::size_t c = forests.size();
  detail::require(c >= 1, "select_independent needs at least one forest");
  detail::require(families.size() == targets.size(), "select_independent: one target per family");
  std::vector<const RootedForest*> ptrs;
  for (const auto& f : forests) ptrs.push_back(&f);

  BigInt k = 0;
  std::size_t positive = 0;
  for (auto x : targets) {
    k += x;
    positive += x > 0;
  }
  const BigInt need = boost::multiprecision::pow(BigInt(positive), static_cast<unsigned>(c - 1)) * k;
  std::vector<ForestTuple> store;
  std::vector<std::vector<std::size_t>> index(families.size());
  for (std::size_t j = 0; j < families.size(); ++j) {
    const auto& fam = families[j];
    for (std::size_t a = 0; a < fam.size(); ++a) {
      detail::check_tuple_shape(ptrs, fam[a], "family " + std::to_string(j) + " tuple " + std::to_string(a),
                                false);
      for (std::size_t b = 0; b < a; ++b) {
        detail::require(tuples_independent(fam[a], fam[b]),
                        "family " + std::to_string(j) + " is not independent");
      }
      index[j].push_back(store.size());
      store.push_back(fam[a]);
    }
    if (targets[j] > 0) {
      detail::require(fam.size() >= need, "family " + std::to_string(j) + " has " +
                                              std::to_string(fam.size()) + " tuples, needs " +
                                              need.str());
    }
  }
  std::vector<BigInt> big_targets(targets.begin(), targets.end());
  auto picked = detail::select_rec(ptrs, 0, c, store, index, big_targets);

  std::vector<std::vector<std::size_t>> out(families.size());
  std::vector<std::size_t> all;
  for (std::size_t j = 0; j < families.size(); ++j) {
    detail::ensure(picked[j].size() == targets[j], "selection size differs from target");
    for (std::size_t id : picked[j]) {
      out[j].push_back(id - index[j].front());
      all.push_back(id);
    }
    std::sort(out[j].begin(), out[j].end());
  }
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      detail::ensure(tuples_independent(store[all[a]], store[all[b]]), "selection is not independent");
    }
  }
  return out;
}

/// k pairwise independent tuples, or sets X_i in forest i meeting every tuple
/// with sum |X_i| <= ell(k, c).
inline PackOrHitResult tuples_pack_or_hit(const std::vector<RootedForest>& forests,
                                          const std::vector<ForestTuple>& tuples, std::uint64_t k) {
  std::vector<const RootedForest*> ptrs;
  for (const auto& f : forests) ptrs.push_back(&f);
  return detail::tuples_pack_or_hit_impl(ptrs, tuples, BigInt(k));
}

/// k pairwise vertex-disjoint members, or one X meeting every member with
/// |X| <= ell*(k, c). Members are vertex sets of F, each inducing at most c
/// components. The hit is returned as hit[0].
inline PackOrHitResult subgraphs_pack_or_hit(const RootedForest& f,
                                             const std::vector<VertexSet>& subgraphs,
                                             std::uint64_t k, std::size_t c,
                                             HellyVariant variant = HellyVariant::Refined) {
  detail::check_budget_args(BigInt(k), c);
  for (std::size_t a = 0; a < subgraphs.size(); ++a) {
    const auto& s = subgraphs[a];
    detail::require(!s.empty(), "subgraph " + std::to_string(a) + " is empty");
    for (Vertex v : s) {
      detail::require(v < f.vertex_count(), "subgraph " + std::to_string(a) + ": vertex " +
                                                std::to_string(v) + " outside the forest");
    }
    const std::size_t parts = f.components_of(s);
    detail::require(parts <= c, "subgraph " + std::to_string(a) + " has " + std::to_string(parts) +
                                    " components, more than c = " + std::to_string(c));
  }
  PackOrHitResult result;
  if (variant == HellyVariant::Refined) result.budget = detail::ell_star(BigInt(k), c);

  // Greedy pre-pass, smallest members first. The construction below may
  // answer Hit even when the members are already disjoint, since its first
  // hitting sets are built for enlarged members.
  std::vector<std::size_t> by_size(subgraphs.size());
  for (std::size_t a = 0; a < by_size.size(); ++a) by_size[a] = a;
  std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
    return subgraphs[a].size() < subgraphs[b].size();
  });
  VertexSet used;
  for (std::size_t a : by_size) {
    if (result.pack.size() == k) break;
    if (subgraphs[a].intersects(used)) continue;
    used.insert_all(subgraphs[a]);
    result.pack.push_back(a);
  }
  if (result.pack.size() == k) {
    result.tag = PackOrHitResult::Tag::Pack;
    std::sort(result.pack.begin(), result.pack.end());
    return result;
  }
  result.pack.clear();

  detail::PreparedForest prepared = detail::prepare_forest(f, {});
  std::vector<VertexSet> images;
  for (const auto& s : subgraphs) images.push_back(prepared.image(s));

  detail::CoreResult r = detail::subgraphs_core(prepared.tree, images, BigInt(k), c, variant);
  if (r.pack) {
    result.tag = PackOrHitResult::Tag::Pack;
    result.pack = std::move(r.chosen);
    std::sort(result.pack.begin(), result.pack.end());
    detail::ensure(result.pack.size() == k, "subgraph pack has the wrong size");
    for (std::size_t a = 0; a < result.pack.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        detail::ensure(!subgraphs[result.pack[a]].intersects(subgraphs[result.pack[b]]),
                       "subgraph pack is not disjoint");
      }
    }
    return result;
  }
  result.hit.assign(1, {});
  for (Vertex x : r.hit[0]) {
    const auto& who = prepared.owner[x];
    if (who.kind == detail::PreparedForest::Kind::Real) result.hit[0].insert(static_cast<Vertex>(who.value));
  }
  for (std::size_t a = 0; a < subgraphs.size(); ++a) {
    detail::ensure(subgraphs[a].intersects(result.hit[0]),
                   "subgraph " + std::to_string(a) + " not hit");
  }
  if (variant == HellyVariant::Refined) {
    detail::ensure(BigInt(result.hit[0].size()) <= result.budget, "subgraph hit exceeds ell*(k,c)");
  } else {
    result.budget = r.bound;
  }
  return result;
}

}  // namespace coarse_ep

#endif  // COARSE_EP_FOREST_HELLY_HPP
