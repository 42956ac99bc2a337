#ifndef COARSE_EP_BFS_UNICYCLE_HPP
#define COARSE_EP_BFS_UNICYCLE_HPP

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coarse_ep/cycle.hpp"
#include "coarse_ep/metric.hpp"

namespace coarse_ep {

/// C-rooted spanning BFS-unicycle of the ball graph G[B(V(C), r)].
///
/// The ball graph shares the id space of G. Every ball vertex off the root
/// cycle points at its smallest neighbour one BFS layer closer to V(C).
class BfsUnicycle {
 public:
  BfsUnicycle(const Graph& g, Cycle root, std::uint32_t radius)
      : root_(std::move(root)), radius_(radius) {
    detail::require(root_.is_valid_in(g), "cycle " + root_.to_string() + " is not a cycle of G");
    const VertexSet on_cycle = root_.vertex_set();
    vertices_ = ball(g, on_cycle, radius);
    host_ = g.induced(vertices_);
    ShortestPathForest spf = shortest_path_forest(host_, on_cycle);
    depth_ = std::move(spf.depth);
    parent_ = std::move(spf.parent);
    children_.assign(g.vertex_count(), {});
    for (Vertex v : vertices_) {
      if (parent_[v]) children_[*parent_[v]].push_back(v);
    }
  }

  const Graph& host() const { return host_; }
  const Cycle& root_cycle() const { return root_; }
  std::uint32_t radius() const { return radius_; }
  const VertexSet& vertices() const { return vertices_; }
  bool contains(Vertex v) const { return vertices_.contains(v); }

  std::uint32_t depth(Vertex v) const {
    require_member(v);
    return *depth_[v];
  }

  std::optional<Vertex> parent(Vertex v) const {
    require_member(v);
    return parent_[v];
  }

  std::span<const Vertex> children(Vertex v) const {
    require_member(v);
    return children_[v];
  }

  /// E(U): the root cycle edges plus one parent edge per non-cycle vertex, sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out = root_.edges();
    for (Vertex v : vertices_) {
      if (parent_[v]) out.emplace_back(v, *parent_[v]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Graph as_graph() const { return Graph::from_edges(host_.vertex_count(), edges()); }

  /// Edges of the ball graph not in U, sorted.
  std::vector<Edge> non_tree_edges() const {
    std::vector<Edge> all = host_.edges();
    std::vector<Edge> mine = edges();
    std::vector<Edge> out;
    std::set_difference(all.begin(), all.end(), mine.begin(), mine.end(), std::back_inserter(out));
    return out;
  }

  /// Vertices whose path to the root cycle in U passes through v (v included).
  VertexSet descendants(Vertex v) const {
    require_member(v);
    std::vector<Vertex> out{v};
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (Vertex w : children_[out[i]]) out.push_back(w);
    }
    return VertexSet(std::move(out));
  }

  /// The parent chain from v down to the root cycle; its length is depth(v).
  std::vector<Vertex> leg(Vertex v) const {
    require_member(v);
    std::vector<Vertex> path{v};
    while (parent_[path.back()]) path.push_back(*parent_[path.back()]);
    return path;
  }

  /// Parent/depth table for debugging.
  std::string dump() const {
    std::ostringstream out;
    out << "root " << root_.to_string() << " radius " << radius_ << '\n';
    for (Vertex v : vertices_) {
      out << v << " depth " << *depth_[v];
      if (parent_[v]) out << " parent " << *parent_[v];
      out << '\n';
    }
    return out.str();
  }

 private:
  void require_member(Vertex v) const {
    detail::require(contains(v), "vertex " + std::to_string(v) + " is outside the BFS-unicycle");
  }

  Graph host_;
  Cycle root_;
  std::uint32_t radius_;
  VertexSet vertices_;
  DistanceMap depth_;
  std::vector<std::optional<Vertex>> parent_;
  std::vector<std::vector<Vertex>> children_;
};

inline BfsUnicycle build_bfs_unicycle(const Graph& g, const Cycle& c, std::uint32_t r) {
  return BfsUnicycle(g, c, r);
}

}  // namespace coarse_ep

#endif  // COARSE_EP_BFS_UNICYCLE_HPP
