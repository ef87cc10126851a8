#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "chtheta/errors.hpp"
#include "chtheta/run.hpp"

using namespace chtheta;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "branch_points": [-3, -2, 0, 1, 2, 3],
  "a": {"lambda": -4},
  "e_index": 1
})";

ErrorKind parse_error(const std::string& text) {
  try {
    parse_config_text(text, "t");
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::InvalidArgument;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("chtheta_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("defaults are filled in") {
  const RunConfig c = parse_config_text(kMinimal, "mini");
  CHECK(c.name == "mini");
  CHECK(c.a_sheet == 1);
  CHECK(c.k == 1.0);
  CHECK(c.zeta_re == 0.0);
  CHECK(c.preset == Preset::smooth);
  CHECK(c.grid.ny == 64);
  CHECK(c.grid.node_kind == NodeKind::chebyshev);
  CHECK(c.truncation_eps == 1e-12);
  CHECK(c.csv_path == "mini.csv");
  CHECK(c.meta_path == "mini.meta.json");
  CHECK_FALSE(d_spec_of(c).vector.has_value());

  const RunConfig back = parse_config_text(config_to_json(c), "mini");
  CHECK(back.branch_points == c.branch_points);
  CHECK(back.grid.nt == c.grid.nt);
}

TEST_CASE("strict parsing") {
  CHECK(parse_error("{") == ErrorKind::ConfigParse);
  CHECK(parse_error(R"({"branch_points": [0, 1], "a": {"lambda": -1}, "e_index": 1, "extra": 2})") ==
        ErrorKind::ConfigParse);
  CHECK(parse_error(R"({"a": {"lambda": -1}, "e_index": 1})") == ErrorKind::ConfigParse);
  CHECK(parse_error(R"({"branch_points": [0, 1, 2, 3], "a": {"lambda": -1, "sheet": 3}, "e_index": 1})") ==
        ErrorKind::ConfigParse);
  CHECK(parse_error(R"({"branch_points": [0, 1, 2, 3], "a": {"lambda": -1}, "e_index": 1,
                        "grid": {"Ny": 1}})") == ErrorKind::ConfigParse);
  CHECK(parse_error(R"({"branch_points": [0, 1, 2, 3], "a": {"lambda": -1}, "e_index": 1,
                        "preset": "wavy"})") == ErrorKind::ConfigParse);
  CHECK(parse_error(R"({"branch_points": [0, 1, 2, 3], "a": {"lambda": -1}, "e_index": 1,
                        "d": {"characteristics": [[1], [0]], "vector": [[0, 0]]}})") ==
        ErrorKind::ConfigParse);
}

TEST_CASE("explicit d") {
  const RunConfig c = parse_config_text(
      R"({"branch_points": [0, 1, 2, 3], "a": {"lambda": -1}, "e_index": 1,
          "d": {"vector": [[0.5, 1.0]]}})",
      "v");
  const DSpec d = d_spec_of(c);
  REQUIRE(d.vector.has_value());
  CHECK((*d.vector)(0) == cplx(0.5, 1.0));
}

TEST_CASE("solve writes CSV and metadata") {
  const fs::path dir = scratch_dir("solve");
  const fs::path cfg = dir / "small.json";
  {
    std::ofstream(cfg) << R"({
      "branch_points": [-3, -2, 0, 1, 2, 3],
      "a": {"lambda": -4},
      "e_index": 1,
      "grid": {"y0": -2, "y1": 2, "Ny": 9, "t0": -0.5, "t1": 0.5, "Nt": 5},
      "checks": {"fay": true, "pde": true, "samples": 10}
    })";
  }
  std::ostringstream out, err;
  CHECK(run("solve", cfg, dir / "out", out, err) == 0);
  CHECK(err.str().empty());
  std::ifstream csv(dir / "out" / "small.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,y,x,u,ux,uxx,m,cusp");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 45);

  std::ifstream meta_in(dir / "out" / "small.meta.json");
  const auto meta = nlohmann::json::parse(meta_in);
  CHECK(meta.contains("config"));
  CHECK(meta["params"].contains("alpha1"));
  CHECK(meta["params"].contains("B"));
  CHECK(meta["checks"]["fay"]["max"].get<double>() < 1e-6);
  CHECK(meta["reality"]["max"].get<double>() < 1e-8);
}

TEST_CASE("periods and error reporting") {
  const fs::path dir = scratch_dir("periods");
  const fs::path cfg = dir / "p.json";
  { std::ofstream(cfg) << kMinimal; }
  std::ostringstream out, err;
  CHECK(run("periods", cfg, std::nullopt, out, err) == 0);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["genus"] == 2);
  CHECK(j["invariants"]["symmetry"].get<double>() < 1e-10);

  std::ostringstream o2, e2;
  CHECK(run("bogus", cfg, std::nullopt, o2, e2) == 2);

  const fs::path bad = dir / "bad.json";
  {
    std::ofstream(bad) << R"({"branch_points": [0, 1, 2], "a": {"lambda": -1}, "e_index": 1})";
  }
  std::ostringstream o3, e3;
  CHECK(run("periods", bad, std::nullopt, o3, e3) == 1);
  CHECK(e3.str().find("OddBranchCount") != std::string::npos);
}
