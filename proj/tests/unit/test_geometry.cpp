#include "doctest.h"

#include "maob/geometry.hpp"
#include "maob/stencil.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace maob;

TEST_CASE("grid index and unravel agree") {
  const Grid g({-1.0, 0.0, 2.0}, {1.0, 1.0, 3.0}, {4, 5, 3});
  CHECK(g.node_count() == 5 * 6 * 4);
  CHECK(g.stride(2) == 1);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    int ijk[3];
    g.unravel(i, ijk);
    CHECK(g.index(ijk) == i);
  }
  const int last[3] = {4, 5, 3};
  const Vec p = g.point(g.index(last));
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(1.0));
  CHECK(p[2] == doctest::Approx(3.0));
  CHECK(g.max_h() == doctest::Approx(0.5));
  CHECK(g.min_h() == doctest::Approx(0.2));
}

TEST_CASE("domain membership and boundary distance") {
  const auto ball = ConvexDomain::ball(Vec::Zero(2), 1.0);
  CHECK(ball.contains(Vec::Constant(2, 0.7)));
  CHECK_FALSE(ball.contains(Vec::Constant(2, 0.8)));
  CHECK(ball.boundary_distance(Vec::Zero(2)) == doctest::Approx(1.0));

  const auto box = ConvexDomain::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
  Vec x(2);
  x << 0.5, -0.25;
  CHECK(box.boundary_distance(x) == doctest::Approx(0.5));
  CHECK(box.vertices().size() == 4);
  Vec dir(2);
  dir << 1.0, 0.0;
  CHECK(box.exit_length(x, dir) == doctest::Approx(0.5));
}

TEST_CASE("hull of a square has four facets") {
  std::vector<Vec> pts;
  for (double a : {-1.0, 1.0})
    for (double b : {-1.0, 1.0}) {
      Vec p(2);
      p << a, b;
      pts.push_back(p);
    }
  Vec c(2);
  c << 0.1, 0.2;
  pts.push_back(c);
  const auto hs = hull_halfspaces(pts);
  CHECK(hs.size() == 4);
  const auto hull = ConvexDomain::hull(pts);
  CHECK(hull.contains(Vec::Zero(2)));
  CHECK(polytope_vertices(hull.halfspaces(), 2).size() == 4);
}

TEST_CASE("cube hull in three dimensions") {
  std::vector<Vec> pts;
  for (int m = 0; m < 8; ++m) {
    Vec p(3);
    for (int i = 0; i < 3; ++i) p[i] = (m >> i) & 1 ? 1.0 : 0.0;
    pts.push_back(p);
  }
  CHECK(hull_halfspaces(pts).size() == 6);
}

TEST_CASE("hausdorff sentinels") {
  const Grid g({0.0, 0.0}, {1.0, 1.0}, {10, 10});
  CellSet a{g, {}}, b{g, {}};
  CHECK(hausdorff_distance(a, b) == 0.0);
  a.members = {0};
  CHECK(std::isinf(hausdorff_distance(a, b)));
  b.members = {0, 1, 2};
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.2));
}

TEST_CASE("distance transform matches brute force") {
  const Grid g({0.0, 0.0}, {1.0, 2.0}, {8, 16});
  std::vector<std::uint8_t> seed(g.node_count(), 0);
  seed[5] = seed[70] = seed[100] = 1;
  const auto d = distance_transform(g, seed);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j : {5, 70, 100}) best = std::min(best, (g.point(i) - g.point(j)).norm());
    CHECK(d[i] == doctest::Approx(best));
  }
}

TEST_CASE("sublevel volume of a paraboloid") {
  const GridMask gm = make_grid(ConvexDomain::ball(Vec::Zero(2), 1.0), 256);
  ScalarField v(gm.grid, gm.inside);
  for (std::size_t i = 0; i < v.size(); ++i) v.values[i] = 0.5 * gm.grid.point(i).squaredNorm();
  // {|x|^2 / 2 < h} is the disc of radius sqrt(2h).
  CHECK(sublevel_volume(v, 0.125) == doctest::Approx(std::numbers::pi * 0.25).epsilon(0.02));
  Halfspace right{Vec::Unit(2, 0) * -1.0, 0.0};
  CHECK(sublevel_volume(v, 0.125, right) == doctest::Approx(std::numbers::pi * 0.125).epsilon(0.03));
}

TEST_CASE("cell set full cells") {
  const Grid g({0.0, 0.0}, {1.0, 1.0}, {4, 4});
  CellSet s{g, {}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int ij[2] = {i, j};
      s.members.push_back(g.index(ij));
    }
  std::sort(s.members.begin(), s.members.end());
  CHECK(s.full_cells() == 4);
}

TEST_CASE("stencil frames are orthogonal") {
  for (int n : {2, 3}) {
    const StencilSet st = StencilSet::make(n, 2);
    REQUIRE(!st.frames.empty());
    for (const auto& fr : st.frames) {
      REQUIRE(static_cast<int>(fr.size()) == n);
      for (std::size_t a = 0; a < fr.size(); ++a)
        for (std::size_t b = a + 1; b < fr.size(); ++b) {
          int dot = 0;
          for (int i = 0; i < n; ++i) dot += st.directions[fr[a]][i] * st.directions[fr[b]][i];
          CHECK(dot == 0);
        }
    }
  }
  CHECK(StencilSet::make(2, 1).directions.size() == 4);
  CHECK(StencilSet::width_for(2, 8) == 1);
  CHECK(StencilSet::width_for(2, 1024) == 4);
  CHECK(StencilSet::width_for(3, 1024) == 2);
}
