#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../tools/cli.hpp"

using namespace coarse_ep;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "coarse-ep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name, const std::string& text = "") {
  const auto dir = std::filesystem::temp_directory_path() / "coarse-ep-cli-test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  if (!text.empty()) std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string slurp(const std::string& path) { return cli::read_file(path); }

}  // namespace

TEST_CASE("solve and verify on a triangle", "[cli]") {
  const auto graph = scratch("tri.txt", "3 3\n0 1\n1 2\n2 0\n");
  const auto cert = scratch("tri-cert.json");
  auto solved = run({"solve", "--graph", graph, "--k", "1", "--d", "1", "--out", cert});
  CHECK(solved.code == 0);
  CHECK(parse_certificate(slurp(cert)).is_packing());
  CHECK(run({"verify", "--graph", graph, "--cert", cert, "--k", "1", "--d", "1"}).code == 0);

  auto hit = run({"solve", "--graph", graph, "--k", "2", "--d", "1"});
  CHECK(hit.code == 1);
  const auto hit_cert = scratch("tri-hit.json", hit.out);
  CHECK(run({"verify", "--graph", graph, "--cert", hit_cert, "--k", "2", "--d", "1"}).code == 1);
}

TEST_CASE("tampered certificates exit 2 with a reason", "[cli]") {
  const auto graph = scratch("tri2.txt", "3 3\n0 1\n1 2\n2 0\n");
  const auto bad = scratch("bad.json", R"({"type":"packing","k":1,"d":1,"cycles":[[0,1,5]]})");
  auto r = run({"verify", "--graph", graph, "--cert", bad, "--k", "1", "--d", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("not a cycle of G") != std::string::npos);

  const auto wrong_x = scratch("bad-x.json",
                               R"({"type":"hitting","k":1,"d":1,"X":[],"radius":19,"budget":"418039166"})");
  r = run({"verify", "--graph", graph, "--cert", wrong_x, "--k", "1", "--d", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("not a forest") != std::string::npos);

  const auto garbage = scratch("garbage.json", "{ nope");
  CHECK(run({"verify", "--graph", graph, "--cert", garbage, "--k", "1", "--d", "1"}).code == 2);
}

TEST_CASE("bad input exits 2", "[cli]") {
  const auto graph = scratch("tri3.txt", "3 3\n0 1\n1 2\n2 0\n");
  CHECK(run({"solve", "--graph", graph, "--k", "0", "--d", "1"}).code == 2);
  CHECK(run({"solve", "--graph", graph, "--k", "1"}).code == 2);
  CHECK(run({"solve", "--graph", scratch("missing-file.txt"), "--k", "1", "--d", "1"}).code == 2);
  const auto broken = scratch("broken.txt", "3 2\n0 1\n");
  auto r = run({"solve", "--graph", broken, "--k", "1", "--d", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("found 1") != std::string::npos);
  CHECK(run({"generate", "random-gnm", "--n", "4", "--m", "7"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("generate examples", "[cli]") {
  auto grid = run({"generate", "grid", "--rows", "2", "--cols", "2"});
  REQUIRE(grid.code == 0);
  const Graph c4 = parse_edge_list(grid.out);
  CHECK(c4.vertex_count() == 4);
  CHECK(c4.edge_count() == 4);
  CHECK(cycle_rank(c4) == 1);

  auto empty = run({"generate", "random-gnm", "--n", "6", "--m", "0", "--seed", "9"});
  CHECK(parse_edge_list(empty.out).edge_count() == 0);

  auto dc = run({"generate", "disjoint-cycles", "--count", "3", "--length", "4", "--gap", "5"});
  CHECK(max_d_packing(parse_edge_list(dc.out), 5) == 3);

  // Same kind, params and seed give byte-identical output.
  for (const char* kind : {"random-gnm", "subdivision"}) {
    auto a = run({"generate", kind, "--n", "12", "--m", "20", "--seed", "4"});
    auto b = run({"generate", kind, "--n", "12", "--m", "20", "--seed", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(format_edge_list(parse_edge_list(a.out)) == a.out);
  }
}

TEST_CASE("oracle subcommands", "[cli]") {
  const auto graph = scratch("two-tri.txt", "6 6\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
  CHECK(run({"oracle", "max-packing", "--graph", graph, "--d", "3"}).out == "2\n");
  CHECK(run({"oracle", "min-hitting", "--graph", graph, "--radius", "1"}).out == "2\n");
  CHECK(run({"oracle", "cycles", "--graph", graph}).out == "0,1,2\n3,4,5\n");
  setenv("COARSE_EP_LIMITS", "4,10", 1);
  auto limited = run({"oracle", "cycles", "--graph", graph});
  unsetenv("COARSE_EP_LIMITS");
  CHECK(limited.code == 2);
  CHECK(limited.err.find("limit 4") != std::string::npos);
}

TEST_CASE("helly tuple families", "[cli]") {
  const auto fam = scratch("fam.txt",
                           "# two paths\n3 2\n0 1\n1 2\n2 1\n0 1\n"
                           "tuple: 0:0,1 ; 1:0\ntuple: 0:1,2\ntuple: 0:2 ; 1:1\n");
  auto parsed = cli::parse_tuple_family(slurp(fam));
  REQUIRE(parsed.forests.size() == 2);
  REQUIRE(parsed.tuples.size() == 3);
  CHECK_FALSE(parsed.tuples[1][1].has_value());

  auto r = run({"helly", "--family", fam, "--k", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("hit: ", 0) == 0);
  CHECK(r.out.find("budget: 20") != std::string::npos);

  CHECK_THROWS_AS(cli::parse_tuple_family("3 2\n0 1\n1 2\ntuple: 0:0,2\n"), InputError);
  CHECK_THROWS_AS(cli::parse_tuple_family("3 2\n0 1\n1 2\ntuple: 1:0\n"), InputError);
}

TEST_CASE("selftest and bench", "[cli]") {
  auto self = run({"selftest", "--threads", "2"});
  CHECK(self.code == 0);
  CHECK(self.out.find("9 properties executed, 9 passed") != std::string::npos);

  auto bench = run({"bench", "--count", "4", "--seed", "2"});
  REQUIRE(bench.code == 0);
  std::istringstream lines(bench.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "instance,n,m,k,d,outcome,|X|,runtime_ms");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 4 * 6);
}
