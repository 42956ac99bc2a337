#ifndef COARSE_EP_GRAPH_IO_HPP
#define COARSE_EP_GRAPH_IO_HPP

#include <charconv>
#include <limits>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "coarse_ep/graph.hpp"

namespace coarse_ep {

namespace detail {

// Splits on ASCII whitespace and parses every token as an unsigned decimal.
inline bool parse_unsigned_fields(std::string_view line, std::vector<std::uint64_t>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
      ++pos;
    }
    if (pos == line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, value);
    if (ec != std::errc() || ptr != line.data() + end) return false;
    out.push_back(value);
    pos = end;
  }
  return true;
}

inline bool is_skippable(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

}  // namespace detail

/// Reads the edge-list format: a header line "n m" followed by m lines "u v".
/// Blank lines and lines starting with '#' are ignored. Errors carry the
/// 1-based line number.
inline Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::uint64_t> fields;
  auto fail = [&](const std::string& why) {
    throw InputError("line " + std::to_string(line_no) + ": " + why);
  };

  bool have_header = false;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::vector<std::pair<Vertex, Vertex>> pairs;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_skippable(line)) continue;
    if (!detail::parse_unsigned_fields(line, fields) || fields.size() != 2) {
      fail(have_header ? "expected 'u v'" : "expected header 'n m'");
    }
    if (!have_header) {
      n = fields[0];
      m = fields[1];
      if (n > std::numeric_limits<Vertex>::max()) fail("vertex count too large");
      have_header = true;
      continue;
    }
    if (pairs.size() == m) fail("more than " + std::to_string(m) + " edge lines");
    if (fields[0] >= n || fields[1] >= n) fail("endpoint outside [0," + std::to_string(n) + ")");
    if (fields[0] == fields[1]) fail("self-loop at vertex " + std::to_string(fields[0]));
    pairs.emplace_back(static_cast<Vertex>(fields[0]), static_cast<Vertex>(fields[1]));
  }
  if (!have_header) throw InputError("empty edge list: missing header 'n m'");
  if (pairs.size() != m) {
    throw InputError("header announces " + std::to_string(m) + " edges, found " +
                     std::to_string(pairs.size()));
  }
  return build_graph(static_cast<std::size_t>(n), pairs);
}

inline Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return read_edge_list(in);
}

inline Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_edge_list(in);
}

/// Canonical serialization: header then edges in sorted order.
inline std::string format_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

}  // namespace coarse_ep

#endif  // COARSE_EP_GRAPH_IO_HPP
