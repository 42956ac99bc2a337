#ifndef COARSE_EP_CERTIFICATE_HPP
#define COARSE_EP_CERTIFICATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarse_ep/cycle.hpp"
#include "coarse_ep/forest_helly.hpp"
#include "coarse_ep/graph.hpp"
#include "coarse_ep/metric.hpp"
#include "coarse_ep/subcubic_packing.hpp"

namespace coarse_ep {

/// g(d) = 19d.
inline std::uint64_t g_bound(std::uint64_t d) {
  detail::require(d >= 1, "g(d) needs d >= 1");
  return 19 * d;
}

/// k + ceil(s(k) / 2), the packing target handed to the subgraph Helly step.
inline std::uint64_t k_star(std::uint64_t k) {
  detail::require(k >= 1, "k* needs k >= 1");
  return k + (s_bound(k) + 1) / 2;
}

/// f(k) = 2k + 2k^2 + (C(k,2) + k) s(k) + ell*(k*, 3).
inline BigInt f_bound(std::uint64_t k) {
  detail::require(k >= 1, "f(k) needs k >= 1");
  const BigInt kk = k;
  const BigInt pairs = kk * (kk - 1) / 2;
  return 2 * kk + 2 * kk * kk + (pairs + kk) * s_bound(k) + budgets(k_star(k), 3).ell_star;
}

/// Either k cycles pairwise farther than d apart, or a set X whose radius-19d
/// ball meets every cycle, with |X| <= f(k).
struct Certificate {
  enum class Tag { Packing, Hitting };
  Tag tag = Tag::Packing;
  std::uint64_t k = 0;
  std::uint32_t d = 0;
  std::vector<Cycle> cycles;
  VertexSet x;
  std::uint64_t radius = 0;
  BigInt budget = 0;

  bool is_packing() const { return tag == Tag::Packing; }

  static Certificate packing(std::uint64_t k, std::uint32_t d, std::vector<Cycle> cycles) {
    Certificate c;
    c.k = k;
    c.d = d;
    c.cycles = std::move(cycles);
    return c;
  }
  static Certificate hitting(std::uint64_t k, std::uint32_t d, VertexSet x) {
    Certificate c;
    c.tag = Tag::Hitting;
    c.k = k;
    c.d = d;
    c.x = std::move(x);
    c.radius = g_bound(d);
    c.budget = f_bound(k);
    return c;
  }

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct Verdict {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Re-checks a certificate from scratch with plain BFS. Independent of how the
/// certificate was produced.
inline Verdict verify(const Graph& g, const Certificate& cert, std::uint64_t k, std::uint32_t d) {
  auto fail = [](std::string why) { return Verdict{false, std::move(why)}; };
  if (cert.k != k || cert.d != d) {
    return fail("certificate is for k = " + std::to_string(cert.k) + ", d = " + std::to_string(cert.d) +
                ", expected k = " + std::to_string(k) + ", d = " + std::to_string(d));
  }
  const std::size_t n = g.vertex_count();
  if (cert.is_packing()) {
    if (cert.cycles.size() != k) {
      return fail("expected " + std::to_string(k) + " cycles, got " + std::to_string(cert.cycles.size()));
    }
    for (const Cycle& c : cert.cycles) {
      if (!c.is_valid_in(g)) return fail("cycle " + c.to_string() + " is not a cycle of G");
    }
    for (std::size_t a = 0; a < cert.cycles.size(); ++a) {
      const DistanceMap near = bfs_distances(g, cert.cycles[a].vertex_set(), d);
      for (std::size_t b = a + 1; b < cert.cycles.size(); ++b) {
        for (Vertex v : cert.cycles[b].vertices()) {
          if (near[v]) {
            return fail("distance not > d: cycles " + cert.cycles[a].to_string() + " and " +
                        cert.cycles[b].to_string() + " are within " + std::to_string(*near[v]));
          }
        }
      }
    }
    return {};
  }
  if (k == 0 || d == 0) return fail("a hitting certificate needs k >= 1 and d >= 1");
  for (Vertex v : cert.x) {
    if (v >= n) return fail("X contains " + std::to_string(v) + ", outside the graph");
  }
  if (cert.radius != g_bound(d)) {
    return fail("radius " + std::to_string(cert.radius) + " is not 19d = " + std::to_string(g_bound(d)));
  }
  if (cert.budget != f_bound(k)) return fail("budget is not f(k)");
  if (BigInt(cert.x.size()) > cert.budget) return fail("|X| exceeds the budget f(k)");
  const Graph rest = g.without(ball(g, cert.x, static_cast<std::uint32_t>(cert.radius)));
  if (!is_forest(rest)) return fail("not a forest: G - B(X, 19d) still has a cycle");
  return {};
}

// ------------------------------------------------------------------ JSON

inline nlohmann::ordered_json to_json(const Certificate& cert) {
  nlohmann::ordered_json j;
  j["type"] = cert.is_packing() ? "packing" : "hitting";
  j["k"] = cert.k;
  j["d"] = cert.d;
  if (cert.is_packing()) {
    auto cycles = nlohmann::ordered_json::array();
    for (const Cycle& c : cert.cycles) {
      cycles.push_back(std::vector<Vertex>(c.vertices().begin(), c.vertices().end()));
    }
    j["cycles"] = std::move(cycles);
  } else {
    j["X"] = cert.x.members();
    j["radius"] = cert.radius;
    j["budget"] = cert.budget.str();  // exceeds 64 bits for k >= 2
  }
  return j;
}

inline std::string certificate_text(const Certificate& cert) { return to_json(cert).dump(2) + "\n"; }

/// Parses the JSON form. Structural problems raise InputError; whether the
/// certificate is valid for a graph is left to verify().
inline Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw InputError("certificate must be a JSON object");
    Certificate cert;
    const std::string type = j.at("type").get<std::string>();
    cert.k = j.at("k").get<std::uint64_t>();
    cert.d = j.at("d").get<std::uint32_t>();
    if (type == "packing") {
      for (const auto& c : j.at("cycles")) cert.cycles.emplace_back(c.get<std::vector<Vertex>>());
    } else if (type == "hitting") {
      cert.tag = Certificate::Tag::Hitting;
      cert.x = VertexSet(j.at("X").get<std::vector<Vertex>>());
      cert.radius = j.at("radius").get<std::uint64_t>();
      const auto& budget = j.at("budget");
      if (!budget.is_string()) throw InputError("budget must be a decimal string");
      const std::string digits = budget.get<std::string>();
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
        throw InputError("budget '" + digits + "' is not a decimal integer");
      }
      cert.budget = BigInt(digits);
    } else {
      throw InputError("unknown certificate type '" + type + "'");
    }
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
}

inline Certificate parse_certificate(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("certificate is not valid JSON: ") + e.what());
  }
  return certificate_from_json(j);
}

}  // namespace coarse_ep

#endif  // COARSE_EP_CERTIFICATE_HPP
