#include "doctest.h"

#include "maob/config.hpp"
#include "maob/experiments.hpp"
#include "maob/field_io.hpp"
#include "maob/report.hpp"

#include <cmath>
#include <sstream>

using namespace maob;

TEST_CASE("field files round trip exactly") {
  const GridMask gm = make_grid(ConvexDomain::ball(Vec::Zero(2), 1.0), 16);
  ScalarField v(gm.grid, gm.inside);
  for (std::size_t i = 0; i < v.size(); ++i) v.values[i] = v.inside(i) ? std::exp(gm.grid.point(i)[0]) / 3.0 : NAN;
  std::stringstream ss;
  write_field(ss, v, 0.5);
  const FieldFile f = read_field(ss);
  CHECK(f.q == 0.5);
  REQUIRE(f.field.grid == v.grid);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(f.field.inside(i) == v.inside(i));
    if (v.inside(i)) CHECK(f.field.values[i] == v.values[i]);
  }
}

TEST_CASE("malformed field files are rejected") {
  std::stringstream bad("NOT-A-FIELD\n");
  CHECK_THROWS_AS(read_field(bad), FieldFormatError);
  std::stringstream short_body("MAOB-FIELD v1\n2 0\n0 1 5 0 1 5\n1\n2\n");
  CHECK_THROWS_AS(read_field(short_body), FieldFormatError);
}

TEST_CASE("config sections, comments and lists") {
  const Config c = Config::parse_string("top = 1\n[a]\nx = 2.5  # note\nlist = 1, 2,3\n[b]\nname = hello\n");
  CHECK(c.integer("top", 0) == 1);
  CHECK(c.num("a.x", 0) == 2.5);
  CHECK(c.list("a.list", {}) == std::vector<double>{1, 2, 3});
  CHECK(c.str("b.name") == "hello");
  CHECK(c.num("b.missing", 7) == 7);
  CHECK_THROWS_AS(c.str("b.missing"), ConfigError);
  CHECK_THROWS_AS(c.require_known({"top", "a.x", "a.list"}), ConfigError);
  CHECK_NOTHROW(c.require_known({"top", "a.x", "a.list", "b.name"}));
  CHECK_THROWS_AS(Config::parse_string("[a]\nx = 1\nx = 2\n"), ConfigError);
}

TEST_CASE("experiment configs validate") {
  const ExperimentConfig e =
      experiment_config(Config::parse_string("[experiment]\nname = cylinder\nn = 3\nq = 1\ndelta_list = 0.2, 0.1\n"));
  CHECK(e.name == "cylinder");
  CHECK(e.n == 3);
  CHECK(e.delta_list.size() == 2);
  CHECK_THROWS_AS(experiment_config(Config::parse_string("[experiment]\nname = polytope\nbogus = 1\n")), ConfigError);
  CHECK_THROWS_AS(experiment_config(Config::parse_string("[experiment]\nname = polytope\nn = 4\n")), ConfigError);
  CHECK_THROWS_AS(experiment_config(Config::parse_string("[experiment]\nname = nope\n")), ConfigError);
}

TEST_CASE("report text and verdict") {
  ExperimentReport r;
  r.name = "demo";
  CHECK_FALSE(r.pass());
  r.skip("later", "not run");
  CHECK_FALSE(r.pass());
  r.check("a", true);
  CHECK(r.pass());
  r.value("x", 0.1);
  r.check("b", false, "detail");
  CHECK_FALSE(r.pass());
  const std::string t = to_text(r);
  CHECK(t.find("[checks]") != std::string::npos);
  CHECK(t.find("b = fail  # detail") != std::string::npos);
  CHECK(t.find("later = skipped: not run") != std::string::npos);
  CHECK(t.find("result = fail") != std::string::npos);
  CHECK(r.get("x") == 0.1);
  CHECK(std::isnan(r.get("y")));
  CHECK(fmt(0.1) == "0.1");
}
