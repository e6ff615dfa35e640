#include "doctest.h"

#include "maob/free_boundary.hpp"

#include <cmath>

using namespace maob;

namespace {

ScalarField field_on(const ConvexDomain& dom, int cells, const std::function<double(const Vec&)>& f) {
  const GridMask gm = make_grid(dom, cells);
  ScalarField v(gm.grid, gm.inside);
  for (std::size_t i = 0; i < v.size(); ++i) v.values[i] = v.inside(i) ? f(gm.grid.point(i)) : NAN;
  return v;
}

}  // namespace

TEST_CASE("log-log fit recovers a pure power") {
  std::vector<double> x, y;
  for (int i = 0; i < 6; ++i) {
    x.push_back(std::pow(2.0, -i));
    y.push_back(3.0 * std::pow(x.back(), 1.7));
  }
  const FitReport f = fit_loglog(x, y, 1.7, 0.01, false);
  CHECK(f.estimate == doctest::Approx(1.7));
  CHECK(f.pass);
  CHECK(f.r_squared == doctest::Approx(1.0));
  const FitReport lb = fit_loglog(x, y, 2.0, 0.1, true);
  CHECK_FALSE(lb.pass);
  CHECK_THROWS_AS(fit_loglog({1, 2, 3}, {1, 2, 3}, 1, 0.1, false), AnalysisError);
}

TEST_CASE("growth exponent of pure powers of the distance") {
  const auto dom = ConvexDomain::ball(Vec::Zero(2), 1.0);
  for (double p : {1.0, 1.5, 2.0}) {
    CAPTURE(p);
    const ScalarField v = field_on(dom, 256, [p](const Vec& x) { return std::pow(std::max(x.norm() - 0.3, 0.0), p); });
    const CellSet K = coincidence_set(v, 1e-14);
    GrowthOptions o;
    o.theory = p;
    o.tolerance = 0.05 * p;  // node-set distances overshoot by about h
    const FitReport f = growth_exponent(v, K, o);
    CHECK(f.pass);
  }
}

TEST_CASE("section volume exponent of the quadratic and the radial quartic") {
  const auto dom = ConvexDomain::ball(Vec::Zero(2), 1.0);
  const ScalarField quad = field_on(dom, 256, [](const Vec& x) { return 0.5 * x.squaredNorm(); });
  const FitReport a = section_scaling(quad, default_levels(quad), 1.0, 0.15);
  CHECK(a.estimate == doctest::Approx(1.0).epsilon(0.05));
  const ScalarField quart = field_on(dom, 256, [](const Vec& x) { return std::pow(x.squaredNorm(), 2) / 48; });
  const FitReport b = section_scaling(quart, default_levels(quart), 0.5, 0.15);
  CHECK(b.estimate == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("coincidence threshold") {
  const Grid g({0.0, 0.0}, {1.0, 1.0}, {64, 64});
  CHECK(default_eps_K(g, 0.0, 0.0) == doctest::Approx(0.01 * std::pow(1.0 / 64, 2)));
  CHECK(default_eps_K(g, 1.0, 1e-4) == doctest::Approx(10 * 1e-8));
  const ScalarField v = field_on(ConvexDomain::ball(Vec::Zero(2), 1.0), 32,
                                 [](const Vec& x) { return std::max(std::abs(x[0]) - 0.25, 0.0); });
  const CellSet K = coincidence_set(v, 1e-12);
  for (std::size_t k = 0; k < K.size(); ++k) CHECK(std::abs(K.center(k)[0]) <= 0.25 + 1e-12);
}

TEST_CASE("faces of a square touching the domain are non-strictly convex edges") {
  std::vector<Halfspace> cross;
  for (int m = 0; m < 4; ++m) {
    Vec nu(2);
    nu << (m & 1 ? -1.0 : 1.0), (m & 2 ? -1.0 : 1.0);
    cross.push_back(Halfspace{nu, 0.5});
  }
  const auto omega = ConvexDomain::polytope(cross);
  const ScalarField v = field_on(omega, 128, [](const Vec& x) {
    return std::pow(std::max(std::abs(x[0]) - 0.25, 0.0), 2) + std::pow(std::max(std::abs(x[1]) - 0.25, 0.0), 2);
  });
  const CellSet K = coincidence_set(v, 1e-14);
  const FaceDecomposition fd = classify_gamma(K, omega);
  CHECK(fd.positive_measure);
  const auto nsc = fd.non_strictly_convex();
  CHECK(nsc.size() == 4);
  for (const Face* f : nsc) CHECK(flat_dimension(*f) == 1);
  CHECK(gamma_nsc_dimension(fd) == 1);
}

TEST_CASE("a disc inside the domain has no flat faces") {
  const auto dom = ConvexDomain::ball(Vec::Zero(2), 1.0);
  const ScalarField v = field_on(dom, 128, [](const Vec& x) { return std::max(x.norm() - 0.4, 0.0); });
  const FaceDecomposition fd = classify_gamma(coincidence_set(v, 1e-14), dom);
  CHECK(fd.positive_measure);
  CHECK(fd.non_strictly_convex().empty());
  CHECK(gamma_nsc_dimension(fd) == 0);
}

TEST_CASE("empty coincidence set is an error for face extraction") {
  const Grid g({0.0, 0.0}, {1.0, 1.0}, {8, 8});
  CHECK_THROWS_AS(classify_gamma(CellSet{g, {}}, ConvexDomain::ball(Vec::Zero(2), 1.0)), GeometryError);
}

TEST_CASE("collar integrals") {
  const auto dom = ConvexDomain::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
  const ScalarField v = field_on(dom, 64, [](const Vec& x) { return 0.5 * x.squaredNorm(); });
  std::vector<std::size_t> face;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.grid.point(i).norm() < 1e-12) face.push_back(i);
  const auto c = collar_integral(v, face, {0.4, 0.2, 0.1});
  // Laplacian 2 over discs of radius delta.
  CHECK(c[0] > c[1]);
  CHECK(c[1] > c[2]);
  CHECK(c[0] == doctest::Approx(2 * M_PI * 0.16).epsilon(0.1));
  CHECK_THROWS_AS(collar_integral(v, face, {0.01}), AnalysisError);
}

TEST_CASE("supporting halfspace lies beyond the set") {
  const ScalarField v = field_on(ConvexDomain::ball(Vec::Zero(2), 1.0), 32,
                                 [](const Vec& x) { return std::max(x.norm() - 0.3, 0.0); });
  const CellSet K = coincidence_set(v, 1e-14);
  const Halfspace h = beyond_support(K, Vec::Unit(2, 0));
  for (std::size_t k = 0; k < K.size(); ++k) CHECK(h.value(K.center(k)) > 0);
}
