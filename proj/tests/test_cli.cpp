#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "deltaloop/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = deltaloop::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields_of(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::istringstream in(line);
  if (sep == ' ') {
    for (std::string f; in >> f;) out.push_back(f);
  } else {
    for (std::string f; std::getline(in, f, sep);) out.push_back(f);
  }
  return out;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("loops_test_" + name);
}

const std::filesystem::path kGolden = std::filesystem::path(LOOPS_DATA_DIR) / ".." / "tests" / "golden";

}  // namespace

TEST_CASE("golden tables") {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"transitions", "propanediol"}, "transitions.txt"},
      {{"loops", "enumerate", "propanediol", "--triad", "a"}, "enumerate_a.txt"},
      {{"loops", "verify", "propanediol", "--pol", "ZXY", "--amp", "1,0.75,2.75"}, "verify_zxy.txt"},
      {{"levels", "propanediol", "--jmax", "2"}, "levels_j2.txt"},
  };
  for (const auto& [args, file] : cases) {
    const auto r = run(args);
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out == read_file(kGolden / file));
    CHECK(run(args).out == r.out);
  }
}

TEST_CASE("quoted numbers appear in the tables") {
  const auto t = run({"transitions", "propanediol"}).out;
  for (const char* s : {"6431.06", "5781.09", "12212.15", "0.693", "0.958", "0.211"})
    CHECK(t.find(s) != std::string::npos);
  CHECK(run({"loops", "verify", "propanediol", "--pol", "ZXY", "--amp", "1,0.75,2.75"}).out.find("1 : 1.04 : 0.84") !=
        std::string::npos);
  const auto l = run({"levels", "propanediol", "--jmax", "1"}).out;
  for (const char* s : {"6431.06", "11363.01", "12212.15"}) CHECK(l.find(s) != std::string::npos);
}

TEST_CASE("CSV and table views carry identical numbers") {
  const auto csv = temp_path("loops.csv");
  const auto r = run({"loops", "enumerate", "propanediol", "--triad", "b", "--all", "--csv", csv.string()});
  REQUIRE(r.code == 0);
  const auto csv_lines = lines(read_file(csv));
  REQUIRE(csv_lines.size() == 28);
  CHECK(csv_lines[0] == "sigma1,sigma2,sigma3,Mb,Mc,closed,|O1|,|O2|,|O3|,residual_max");
  const auto table = lines(r.out);
  // Header line, column line, 27 rows, summary.
  REQUIRE(table.size() == 30);
  for (std::size_t i = 1; i < csv_lines.size(); ++i) {
    const auto c = fields_of(csv_lines[i], ',');
    const auto t = fields_of(table[i + 1], ' ');
    REQUIRE(c.size() == 10);
    REQUIRE(t.size() == 10);
    for (std::size_t k : {0u, 1u, 2u, 3u, 4u, 6u, 7u, 8u, 9u}) CHECK(c[k] == t[k]);
    CHECK((c[5] == "1") == (t[5] == "closed"));
  }
  std::filesystem::remove(csv);

  const auto lv = temp_path("levels.csv");
  REQUIRE(run({"levels", "propanediol", "--jmax", "1", "--csv", lv.string()}).code == 0);
  const auto lv_lines = lines(read_file(lv));
  CHECK(lv_lines.front() == "J,tau,freq_MHz,K,coeff");
  CHECK(lv_lines.size() == 11);
  CHECK(lv_lines[3] == "1,-1,6431.06,0,1.000000");
  std::filesystem::remove(lv);

  const auto dyn = temp_path("dynamics.csv");
  const auto s = run({"simulate", "propanediol", "--config", "circular", "--t", "1", "--dt", "0.1", "--csv", dyn.string()});
  REQUIRE(s.code == 0);
  const auto d_lines = lines(read_file(dyn));
  CHECK(d_lines.front() == "t_us,P_a,P_b,P_c,leakage");
  CHECK(d_lines.size() == 12);
  const auto table_rows = lines(s.out);
  for (std::size_t i = 1; i < d_lines.size(); ++i) {
    const auto c = fields_of(d_lines[i], ',');
    const auto t = fields_of(table_rows[i + 1], ' ');
    CHECK(c == t);
  }
  std::filesystem::remove(dyn);
}

TEST_CASE("simulate and contrast report what the library computes") {
  const auto closed = run({"simulate", "propanediol", "--config", "linear", "--amp", "5,3.75,13.75"});
  CHECK(closed.code == 0);
  CHECK(closed.out.find("loop closed") != std::string::npos);
  const auto tilted = run({"simulate", "propanediol", "--config", "linear", "--tilt2", "5"});
  CHECK(tilted.out.find("not-closed") != std::string::npos);
  const auto c = run({"contrast", "propanediol", "--config", "circular"});
  CHECK(c.code == 0);
  CHECK(c.out.find("max |P_c^R - P_c^L|") != std::string::npos);
  const auto o = run({"loops", "orthogonality", "propanediol", "--samples", "300", "--seed", "4"});
  CHECK(o.code == 0);
  CHECK(o.out.find("holds") != std::string::npos);
  const auto g = run({"loops", "verify", "propanediol", "--field", "0:1:0", "--field", "1:0.5:0+-1:0.5:3.141592653589793",
                      "--field", "1:1:1.5707963267948966+-1:1:1.5707963267948966"});
  CHECK(g.code == 0);
  CHECK(g.out.find("status: closed") != std::string::npos);
  CHECK(run({"loops", "verify", "propanediol", "--pol", "ZZZ"}).out.find("zero-rabi (Omega2 = 0)") != std::string::npos);
}

TEST_CASE("exit codes and diagnostics") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  auto r = run({"levels", "no-such-molecule"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("no-such-molecule") != std::string::npos);
  CHECK(run({"loops", "verify", "propanediol", "--pol", "ZQY"}).code == 2);
  CHECK(run({"loops", "verify", "propanediol", "--sigma", "1,0"}).code == 2);
  CHECK(run({"loops", "verify", "propanediol", "--sigma", "1,-1,0", "--pol", "ZXY"}).code == 2);
  CHECK(run({"loops", "verify", "propanediol", "--pol", "ZXY", "--amp", "1,-1,1"}).code == 2);
  CHECK(run({"loops", "enumerate", "propanediol", "--triad", "q"}).code == 2);
  CHECK(run({"simulate", "propanediol", "--config", "elliptic"}).code == 2);
  CHECK(run({"simulate", "propanediol", "--config", "circular", "--dt", "0"}).code == 2);
  CHECK(run({"contrast", "propanediol", "--pol", "ZXX"}).code == 2);
  CHECK(run({"levels", "propanediol", "--csv", "/nonexistent-dir/x.csv"}).code == 2);

  const auto bad = temp_path("bad.mol");
  std::ofstream(bad) << "name = x\nA_MHz = 3\nB_MHz = 2\nmu_x_D = 0\nmu_y_D = 0\nmu_z_D = 1\n";
  r = run({"levels", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("C_MHz") != std::string::npos);

  std::ofstream(bad) << "name = x\nA_MHz = 3\nB_MHz = 2\nC_MHz = 1\nmu_x_D = 0\nmu_y_D = 0\nmu_z_D = 1\n";
  r = run({"levels", bad.string(), "--jmax", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("3.00") != std::string::npos);
  std::filesystem::remove(bad);
}
