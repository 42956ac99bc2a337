#ifndef COARSE_EP_CYCLE_HPP
#define COARSE_EP_CYCLE_HPP

#include <algorithm>
#include <charconv>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "coarse_ep/graph.hpp"

namespace coarse_ep {

/// A cycle given by its cyclic vertex sequence.
///
/// Stored in canonical form: rotated to start at the minimum id, oriented so
/// that the second vertex is smaller than the last. Two values describing the
/// same cycle subgraph therefore compare equal.
class Cycle {
 public:
  explicit Cycle(std::vector<Vertex> sequence) : vertices_(std::move(sequence)) {
    if (vertices_.size() < 3) {
      throw InputError("a cycle needs at least 3 vertices, got " +
                       std::to_string(vertices_.size()));
    }
    std::vector<Vertex> sorted = vertices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InputError("cycle repeats a vertex");
    }
    canonicalize();
  }

  /// Parses the comma-separated form produced by `to_string`.
  static Cycle parse(std::string_view text) {
    std::vector<Vertex> ids;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      std::string_view token = text.substr(pos, comma - pos);
      while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
      while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
      Vertex value = 0;
      auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
        throw InputError("malformed cycle token '" + std::string(token) + "'");
      }
      ids.push_back(value);
      pos = comma + 1;
    }
    return Cycle(std::move(ids));
  }

  std::span<const Vertex> vertices() const { return vertices_; }
  std::size_t length() const { return vertices_.size(); }
  VertexSet vertex_set() const { return VertexSet(vertices_); }

  /// Edges in sorted order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      out.emplace_back(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_valid_in(const Graph& g) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!g.has_edge(vertices_[i], vertices_[(i + 1) % vertices_.size()])) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(vertices_[i]);
    }
    return out;
  }

  friend auto operator<=>(const Cycle&, const Cycle&) = default;
  friend bool operator==(const Cycle&, const Cycle&) = default;

 private:
  void canonicalize() {
    auto smallest = std::min_element(vertices_.begin(), vertices_.end());
    std::rotate(vertices_.begin(), smallest, vertices_.end());
    if (vertices_[1] > vertices_.back()) std::reverse(vertices_.begin() + 1, vertices_.end());
  }

  std::vector<Vertex> vertices_;
};

}  // namespace coarse_ep

#endif  // COARSE_EP_CYCLE_HPP
