#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = shadowgeom::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "shadowgeom_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("compute prints single quantities") {
  auto r = run({"compute", "--body", "cube", "--dim", "3", "--quantity", "surface"});
  CHECK(r.code == 0);
  CHECK(r.out == "24\n");
  CHECK(run({"compute", "--body", "cube", "--dim", "3", "--quantity", "volume"}).out == "8\n");
  CHECK(run({"compute", "--body", "cube", "--dim", "3", "--quantity", "inradius"}).out == "1\n");
  CHECK(run({"compute", "--body", "cube", "--dim", "3", "--quantity", "partial"}).out == "6\n");
  r = run({"compute", "--body", "cube", "--dim", "3", "--quantity", "mean-width", "--samples", "2000"});
  CHECK(r.code == 0);
  CHECK(r.out.find("+-") != std::string::npos);
  CHECK(run({"compute", "--body", "cube", "--quantity", "quermass"}).code == 2);
}

TEST_CASE("position reports the identity for the cube") {
  const auto r = run({"position", "--body", "cube", "--dim", "3", "--kind", "min-surface"});
  CHECK(r.code == 0);
  CHECK(r.out.find("partial: 6\n") != std::string::npos);
  CHECK(r.out.find("transform:\n  1 0 0\n  0 1 0\n  0 0 1\n") != std::string::npos);
  CHECK(run({"position", "--body", "cube", "--kind", "sideways"}).code == 2);
}

TEST_CASE("usage errors exit with code two") {
  auto r = run({"compute", "--body", "cube", "--quantity", "volume", "--bogus"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"compute", "--body", "cube", "--dim", "12", "--quantity", "volume"}).code == 2);
  CHECK(run({"plot", "--report", "/nonexistent/report.json"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("bodies lists the corpus and exports files") {
  auto r = run({"bodies", "--dim", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("random-zonotope(7,4)") != std::string::npos);
  const auto file = scratch() / "cross.json";
  r = run({"bodies", "--body", "cross", "--dim", "3", "--out", file.string()});
  CHECK(r.code == 0);
  r = run({"compute", "--body-file", file.string(), "--quantity", "volume"});
  CHECK(r.out == "1.33333333\n");
}

TEST_CASE("verify writes identical reports and plot reads them") {
  const auto dir = scratch();
  const std::vector<std::string> base{"verify", "--dim", "3", "--ids", "ALEK,S-INRADIUS,GHP", "--samples", "2000"};
  auto a = base;
  a.insert(a.end(), {"--out", (dir / "a.json").string()});
  auto b = base;
  b.insert(b.end(), {"--out", (dir / "b.json").string(), "--jobs", "2"});
  CHECK(run(a).code == 0);
  CHECK(run(b).code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK_FALSE(slurp(dir / "a.csv").empty());
  const auto r = run({"plot", "--report", (dir / "a.json").string(), "--out", (dir / "a.svg").string()});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "a.svg").rfind("<svg", 0) == 0);
  CHECK(run({"verify", "--ids", "NOPE"}).code == 2);
}

TEST_CASE("verify exits with one on a failing check") {
  const auto r = run({"verify", "--dim", "3", "--ids", "BALL-EQ", "--quiet"});
  CHECK(r.code == 1);
  CHECK(r.out.find("BALL-EQ ball-approx(500) n=3 fail") != std::string::npos);
}

TEST_CASE("search writes a trace") {
  const auto file = scratch() / "trace.json";
  const auto r = run({"search", "--id", "GHP", "--family", "perturbed-cube", "--budget", "10", "--out", file.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("best ratio: ") != std::string::npos);
  CHECK(slurp(file).find("\"trace\"") != std::string::npos);
}
