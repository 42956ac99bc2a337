#ifndef COARSE_EP_TOOLS_CLI_HPP
#define COARSE_EP_TOOLS_CLI_HPP

// The coarse-ep command line. Kept in a header so tests can drive run()
// in-process with string streams.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coarse_ep/certificate.hpp"
#include "coarse_ep/forest_helly.hpp"
#include "coarse_ep/generators.hpp"
#include "coarse_ep/graph_io.hpp"
#include "coarse_ep/oracle.hpp"
#include "coarse_ep/solver.hpp"
#include "coarse_ep/suites.hpp"

namespace coarse_ep::cli {

enum ExitCode : int { kPacking = 0, kHitting = 1, kError = 2 };

struct RunConfig {
  std::string command;
  std::string graph_path;
  std::string cert_path;
  std::string family_path;
  std::string out_path;
  std::uint64_t k = 1;
  std::uint32_t d = 1;
  std::uint32_t radius = 0;
  std::uint64_t seed = 0;
  std::size_t tuple_cap = kDefaultTupleCap;
  std::size_t rows = 0, cols = 0;
  std::size_t n = 0, m = 0, parts = 1;
  std::size_t count = 0, length = 0, gap = 0;
  unsigned threads = suites::default_threads();
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f || !(f << text)) throw InputError("cannot write '" + cfg.out_path + "'");
}

// ------------------------------------------------------------- tuples

struct TupleFamily {
  std::vector<RootedForest> forests;
  std::vector<ForestTuple> tuples;
};

/// Forest edge lists back to back (each "n m" header followed by its m edge
/// lines), then one line per tuple: "tuple: i:v1,v2 ; j:v3". Forests not
/// named in a tuple hold the null graph there.
inline TupleFamily parse_tuple_family(const std::string& text) {
  TupleFamily fam;
  std::istringstream in(text);
  std::string line;
  std::string block;
  std::size_t expected = 0;
  std::size_t line_no = 0;
  bool in_block = false;
  auto fail = [&](const std::string& why) {
    throw InputError("line " + std::to_string(line_no) + ": " + why);
  };
  auto close_block = [&] {
    if (in_block) fam.forests.emplace_back(parse_edge_list(block));
    block.clear();
    in_block = false;
  };
  std::vector<std::uint64_t> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_skippable(line)) continue;
    if (line.rfind("tuple:", 0) == 0) {
      close_block();
      ForestTuple t(fam.forests.size());
      std::stringstream entries(line.substr(6));
      std::string entry;
      while (std::getline(entries, entry, ';')) {
        if (detail::is_skippable(entry)) continue;
        const auto colon = entry.find(':');
        if (colon == std::string::npos) fail("tuple entry '" + entry + "' lacks 'i:'");
        std::string ids = entry.substr(colon + 1);
        std::replace(ids.begin(), ids.end(), ',', ' ');
        if (!detail::parse_unsigned_fields(entry.substr(0, colon), fields) || fields.size() != 1) {
          fail("bad forest index in '" + entry + "'");
        }
        const std::uint64_t i = fields[0];
        if (i >= t.size()) fail("forest index " + std::to_string(i) + " out of range");
        if (t[i]) fail("forest " + std::to_string(i) + " named twice");
        if (!detail::parse_unsigned_fields(ids, fields) || fields.empty()) fail("bad vertex list in '" + entry + "'");
        VertexSet s;
        for (auto v : fields) {
          if (v >= fam.forests[i].vertex_count()) fail("vertex " + std::to_string(v) + " outside forest " + std::to_string(i));
          s.insert(static_cast<Vertex>(v));
        }
        if (fam.forests[i].components_of(s) != 1) fail("entry for forest " + std::to_string(i) + " is not connected");
        t[i] = std::move(s);
      }
      fam.tuples.push_back(std::move(t));
      continue;
    }
    if (!fam.tuples.empty()) fail("forest after the first tuple line");
    if (!in_block || expected == 0) {
      close_block();
      if (!detail::parse_unsigned_fields(line, fields) || fields.size() != 2) fail("expected header 'n m'");
      expected = fields[1];
      in_block = true;
    } else {
      --expected;
    }
    block += line + "\n";
  }
  close_block();
  if (fam.forests.empty()) throw InputError("tuple family has no forests");
  return fam;
}

inline std::string format_sets(const std::vector<VertexSet>& sets) {
  std::string s;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) s += " ; ";
    s += std::to_string(i) + ":";
    for (std::size_t j = 0; j < sets[i].size(); ++j) s += (j ? "," : "") + std::to_string(sets[i].members()[j]);
  }
  return s;
}

// ----------------------------------------------------------- commands

inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Graph g = read_edge_list(cfg.graph_path);
  const Certificate cert = solve(g, cfg.k, cfg.d, SolveOptions{cfg.tuple_cap});
  const std::string text = certificate_text(cert);
  emit(cfg, text, out);
  if (!cfg.out_path.empty()) {
    out << (cert.is_packing() ? "packing: " + std::to_string(cert.cycles.size()) + " cycles"
                              : "hitting: |X| = " + std::to_string(cert.x.size()))
        << " -> " << cfg.out_path << "\n";
  }
  return cert.is_packing() ? kPacking : kHitting;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Graph g = read_edge_list(cfg.graph_path);
  const Certificate cert = parse_certificate(read_file(cfg.cert_path));
  const Verdict v = verify(g, cert, cfg.k, cfg.d);
  if (!v.ok) {
    err << "invalid certificate: " << v.reason << "\n";
    return kError;
  }
  out << "valid " << (cert.is_packing() ? "packing" : "hitting") << " certificate\n";
  return cert.is_packing() ? kPacking : kHitting;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const Graph g = read_edge_list(cfg.graph_path);
  const OracleLimits limits = OracleLimits::from_env();
  if (cfg.command == "max-packing") {
    out << max_d_packing(g, cfg.d, limits) << "\n";
  } else if (cfg.command == "min-hitting") {
    out << min_ball_hitting(g, cfg.radius, limits) << "\n";
  } else {
    for (const Cycle& c : enumerate_cycles(g, limits)) out << c.to_string() << "\n";
  }
  return 0;
}

inline int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  Graph g;
  if (cfg.command == "grid") {
    g = grid_graph(cfg.rows, cfg.cols);
  } else if (cfg.command == "random-gnm") {
    detail::require(cfg.m <= cfg.n * (cfg.n - 1) / 2, "random-gnm: m exceeds n(n-1)/2");
    g = random_gnm(cfg.n, cfg.m, cfg.seed);
  } else if (cfg.command == "disjoint-cycles") {
    g = disjoint_cycles(cfg.count, cfg.length, cfg.gap);
  } else {
    detail::require(cfg.m <= cfg.n * (cfg.n - 1) / 2, "subdivision: m exceeds n(n-1)/2");
    g = random_subdivision(cfg.n, cfg.m, cfg.parts, cfg.seed);
  }
  emit(cfg, format_edge_list(g), out);
  return 0;
}

inline int cmd_helly(const RunConfig& cfg, std::ostream& out) {
  const TupleFamily fam = parse_tuple_family(read_file(cfg.family_path));
  const PackOrHitResult r = tuples_pack_or_hit(fam.forests, fam.tuples, cfg.k);
  if (r.is_pack()) {
    out << "pack:";
    for (auto i : r.pack) out << ' ' << i;
    out << "\n";
  } else {
    out << "hit: " << format_sets(r.hit) << "\n";
  }
  out << "budget: " << budgets(cfg.k, fam.forests.size()).ell.str() << "\n";
  return 0;
}

inline void print_report(const suites::Report& r, std::ostream& out) {
  out << (r.passed ? "PASS  " : "FAIL  ") << r.name << " (" << r.checked << " checks)";
  if (!r.detail.empty()) out << ": " << r.detail;
  out << "\n";
}

inline int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
  using namespace suites;
  const auto instances = corpus(120, cfg.seed);
  const auto first = solve_corpus(instances, cfg.threads);
  const auto second = solve_corpus(instances, 1);
  const std::vector<Report> reports{
      totality(instances, first),
      hitting_bound(instances, first),
      packing_bound(instances, first),
      oracle_crosscheck(instances, first, 14, 20, cfg.threads),
      refinement_suite(100, cfg.seed),
      simonovits_suite(40, 18, cfg.seed),
      helly_suite(60, cfg.seed),
      budget_regression(),
      determinism(first, second),
  };
  std::size_t passed = 0;
  for (const auto& r : reports) {
    print_report(r, out);
    passed += r.passed;
  }
  out << reports.size() << " properties executed, " << passed << " passed\n";
  return passed == reports.size() ? 0 : kError;
}

inline int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  const auto instances = suites::corpus(cfg.count, cfg.seed);
  const auto records = suites::solve_corpus(instances, cfg.threads);
  std::ostringstream csv;
  csv << "instance,n,m,k,d,outcome,|X|,runtime_ms\n";
  for (const auto& r : records) {
    const Graph& g = instances[r.instance].graph;
    csv << instances[r.instance].name << ',' << g.vertex_count() << ',' << g.edge_count() << ',' << r.k
        << ',' << r.d << ',';
    if (!r.cert) csv << "error,";
    else if (r.cert->is_packing()) csv << "packing,";
    else csv << "hitting," << r.cert->x.size();
    csv << ',' << std::fixed << std::setprecision(3) << r.runtime_ms << "\n";
  }
  emit(cfg, csv.str(), out);
  return 0;
}

// ------------------------------------------------------------- parsing

inline const CLI::Validator at_least_one(
    [](std::string& v) {
      return v.find_first_not_of("0123456789") == std::string::npos && v.find_first_not_of('0') != std::string::npos
                 ? std::string()
                 : "must be an integer >= 1, got '" + v + "'";
    },
    "INT>=1");

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Coarse Erdos-Posa certificates for cycles: k cycles pairwise farther than d apart, "
               "or a small X whose radius-19d ball meets every cycle.",
               "coarse-ep"};
  app.require_subcommand(1);

  auto graph_opt = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph_path, "edge-list file")->required()->check(CLI::ExistingFile);
  };
  auto kd_opts = [&](CLI::App* sub) {
    sub->add_option("--k", cfg.k, "number of cycles")->required()->check(at_least_one);
    sub->add_option("--d", cfg.d, "separation distance")->required()->check(at_least_one);
  };

  auto* solve_cmd = app.add_subcommand("solve", "packing or hitting certificate; exit 0 = packing, 1 = hitting");
  graph_opt(solve_cmd);
  kd_opts(solve_cmd);
  solve_cmd->add_option("--out", cfg.out_path, "write the certificate here instead of stdout");
  solve_cmd->add_option("--tuple-cap", cfg.tuple_cap, "refuse instances with more good tuples");

  auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate; exit 2 with a reason when invalid");
  graph_opt(verify_cmd);
  verify_cmd->add_option("--cert", cfg.cert_path, "certificate JSON")->required()->check(CLI::ExistingFile);
  kd_opts(verify_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive answers for small graphs");
  oracle_cmd->require_subcommand(1);
  auto* maxp = oracle_cmd->add_subcommand("max-packing", "largest d-packing");
  graph_opt(maxp);
  maxp->add_option("--d", cfg.d)->required();
  auto* minh = oracle_cmd->add_subcommand("min-hitting", "smallest X with G - B(X, R) a forest");
  graph_opt(minh);
  minh->add_option("--radius", cfg.radius)->required();
  auto* cyc = oracle_cmd->add_subcommand("cycles", "list every cycle");
  graph_opt(cyc);

  auto* gen_cmd = app.add_subcommand("generate", "write a generated graph as an edge list");
  gen_cmd->require_subcommand(1);
  auto out_seed = [&](CLI::App* sub, bool seeded) {
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    if (seeded) sub->add_option("--seed", cfg.seed, "PRNG seed (mt19937_64)");
  };
  auto* grid = gen_cmd->add_subcommand("grid", "rows x cols grid");
  grid->add_option("--rows", cfg.rows)->required()->check(at_least_one);
  grid->add_option("--cols", cfg.cols)->required()->check(at_least_one);
  out_seed(grid, false);
  auto* gnm = gen_cmd->add_subcommand("random-gnm", "uniform graph with n vertices and m edges");
  gnm->add_option("--n", cfg.n)->required()->check(at_least_one);
  gnm->add_option("--m", cfg.m)->required();
  out_seed(gnm, true);
  auto* dis = gen_cmd->add_subcommand("disjoint-cycles", "count cycles of the given length, one per component");
  dis->add_option("--count", cfg.count)->required()->check(at_least_one);
  dis->add_option("--length", cfg.length)->required()->check(CLI::Range(3, 1 << 30));
  dis->add_option("--gap", cfg.gap, "required separation (components are at infinite distance)");
  out_seed(dis, false);
  auto* subd = gen_cmd->add_subcommand("subdivision", "random gnm graph with every edge cut into parts");
  subd->add_option("--n", cfg.n)->required()->check(at_least_one);
  subd->add_option("--m", cfg.m)->required();
  subd->add_option("--parts", cfg.parts)->check(at_least_one);
  out_seed(subd, true);

  auto* helly_cmd = app.add_subcommand("helly", "pack-or-hit for a tuple family over rooted forests");
  helly_cmd->add_option("--family", cfg.family_path, "forest edge lists then 'tuple:' lines")
      ->required()
      ->check(CLI::ExistingFile);
  helly_cmd->add_option("--k", cfg.k)->required()->check(at_least_one);

  auto* self_cmd = app.add_subcommand("selftest", "run the invariant suite, one line per property");
  self_cmd->add_option("--seed", cfg.seed);
  self_cmd->add_option("--threads", cfg.threads)->check(at_least_one);

  auto* bench_cmd = app.add_subcommand("bench", "solve a generated corpus, CSV per (instance, k, d)");
  bench_cmd->add_option("--count", cfg.count = 100, "corpus size")->check(at_least_one);
  bench_cmd->add_option("--seed", cfg.seed);
  bench_cmd->add_option("--threads", cfg.threads)->check(at_least_one);
  bench_cmd->add_option("--out", cfg.out_path, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kError;
  }

  try {
    if (*solve_cmd) return cmd_solve(cfg, out);
    if (*verify_cmd) return cmd_verify(cfg, out, err);
    if (*oracle_cmd) {
      cfg.command = oracle_cmd->get_subcommands().front()->get_name();
      return cmd_oracle(cfg, out);
    }
    if (*gen_cmd) {
      cfg.command = gen_cmd->get_subcommands().front()->get_name();
      return cmd_generate(cfg, out);
    }
    if (*helly_cmd) return cmd_helly(cfg, out);
    if (*self_cmd) return cmd_selftest(cfg, out);
    return cmd_bench(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace coarse_ep::cli

#endif  // COARSE_EP_TOOLS_CLI_HPP
