#include "doctest.h"

#include "maob/experiments.hpp"

using namespace maob;

TEST_CASE("polytope run at a coarse grid") {
  const ExperimentReport r = run_polytope(2, 1.5, 33);
  CHECK(r.find("P_subset_K")->pass);
  CHECK(r.find("nsc_is_skeleton")->pass);
  CHECK(r.get("nsc_faces") == 4);
}

TEST_CASE("dimension optimality in the plane") {
  const ExperimentReport r = run_dim_optimality(2, 1, 1, 1, 65);
  CHECK(r.pass());
}

TEST_CASE("experiment preconditions") {
  CHECK_THROWS_AS(run_cylinder(2, 0.0, 33), SpecError);
  ExperimentConfig c;
  c.n = 2;
  c.q = 0;
  c.res = 33;
  CHECK_THROWS_AS(make_base("nowhere", c), ConfigError);
  // Constant positive data with q > 0 keeps v away from zero.
  CHECK_THROWS_AS(run_stability(disc_base(2, 1.0, 17, 1.0)), SpecError);
}

TEST_CASE("every experiment name has a config path") {
  for (const auto& name : experiment_names()) {
    const Config cfg = Config::parse_string("[experiment]\nname = " + name + "\n");
    CHECK(experiment_config(cfg).name == name);
  }
}
