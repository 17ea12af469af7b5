#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "deltaloop/errors.hpp"
#include "deltaloop/molecule.hpp"

using namespace deltaloop;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kGood =
    "# comment line\n"
    "name = test\n"
    "A_MHz = 3000   # trailing comment\n"
    "B_MHz = 2000\n"
    "\n"
    "C_MHz = 1000\n"
    "mu_x_D = -0.5\n"
    "mu_y_D = 0.25\n"
    "mu_z_D = 1e-1\n";

}  // namespace

TEST_CASE("bundled propanediol data") {
  for (const std::string& text : {std::string(bundled_molecule_text("propanediol")),
                                  read_file(LOOPS_DATA_DIR "/propanediol.mol")}) {
    const auto m = parse_molecule_config(text);
    CHECK(m.name == "propanediol");
    CHECK(m.A == 8572.05);
    CHECK(m.B == 3640.10);
    CHECK(m.C == 2790.96);
    CHECK(m.mu_x == 1.916);
    CHECK(m.mu_y == 0.365);
    CHECK(m.mu_z == 1.201);
  }
  CHECK(bundled_molecule_text("water").empty());
}

TEST_CASE("config format") {
  const auto m = parse_molecule_config(kGood);
  CHECK(m.name == "test");
  CHECK(m.mu_x == -0.5);
  CHECK(m.mu_z == 0.1);
  CHECK(m.dipole() == dipole::BodyDipole{-0.5, 0.25, 0.1});
  CHECK(m.constants().A() == 3000.0);
}

TEST_CASE("config errors") {
  std::string missing = kGood;
  missing.erase(missing.find("C_MHz"), std::string("C_MHz = 1000\n").size());
  try {
    parse_molecule_config(missing);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("C_MHz") != std::string::npos);
  }

  try {
    parse_molecule_config(std::string(kGood) + "D_MHz = 5\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 10);
    CHECK(std::string(e.what()).find("D_MHz") != std::string::npos);
  }

  try {
    parse_molecule_config("name = x\nA_MHz = abc\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  CHECK_THROWS_AS(parse_molecule_config("name = x\nA_MHz\n"), ParseError);
  CHECK_THROWS_AS(parse_molecule_config(std::string(kGood) + "name = again\n"), ParseError);
  CHECK_THROWS_AS(parse_molecule_config("name = x\nA_MHz = 3\nB_MHz = 1\nC_MHz = 2\nmu_x_D = 0\nmu_y_D = 0\nmu_z_D = 0\n"),
                  RangeError);
}
