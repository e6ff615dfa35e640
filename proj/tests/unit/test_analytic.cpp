#include "doctest.h"

#include "maob/analytic.hpp"
#include "maob/polytope_subsolution.hpp"
#include "../oracle_values.hpp"

#include <cmath>

using namespace maob;

namespace {

AnalyticExample from_case(const oracle::DetCase& c) {
  const std::string name(c.name);
  if (name.starts_with("family_a")) return AnalyticExample::family_a(c.n, c.k, c.q);
  if (name.starts_with("family_b"))
    return AnalyticExample::family_b(c.n, c.k, c.q, c.exponent,
                                     c.rule == "printed" ? GammaRule::printed : GammaRule::balanced);
  if (name.starts_with("cylinder")) return AnalyticExample::cylinder(c.n, c.q);
  return AnalyticExample::radial_power(c.n, c.q);
}

Vec to_vec(const std::vector<double>& x) { return Eigen::Map<const Vec>(x.data(), static_cast<long>(x.size())); }

}  // namespace

TEST_CASE("determinants match the symbolic oracle") {
  for (const auto& c : oracle::det_cases()) {
    CAPTURE(c.name);
    const AnalyticExample e = from_case(c);
    for (const auto& s : c.samples) {
      const Vec x = to_vec(s.x);
      CHECK(e.value(x) == doctest::Approx(s.value).epsilon(1e-12));
      CHECK(e.det_hessian(x) == doctest::Approx(s.det).epsilon(1e-9));
      const double fd = fd_hessian_det([&](const Vec& y) { return e.eval_formula(y).value; }, x, 1e-4);
      CHECK(fd == doctest::Approx(s.det).epsilon(1e-4));
    }
  }
}

TEST_CASE("displayed closed forms agree only with the balanced exponent") {
  for (const auto& c : oracle::det_cases()) {
    CAPTURE(c.name);
    const AnalyticExample e = from_case(c);
    for (const auto& s : c.samples) {
      const double shown = e.displayed_det(to_vec(s.x));
      if (c.rule == "printed")
        CHECK(std::abs(shown - s.det) > 1e-2 * std::abs(s.det));
      else
        CHECK(shown == doctest::Approx(s.det).epsilon(1e-9));
    }
  }
}

TEST_CASE("radial power solves the equation exactly") {
  for (const auto& c : oracle::det_cases()) {
    if (!std::string(c.name).starts_with("radial")) continue;
    for (const auto& s : c.samples) CHECK(s.det == doctest::Approx(std::pow(s.value, c.q)).epsilon(1e-12));
  }
}

TEST_CASE("exponent admissibility") {
  CHECK(family_exponents(FamilyKind::family_a, 3, 1, 0).admissible);
  CHECK(family_exponents(FamilyKind::family_a, 3, 1, 0).exponent == doctest::Approx(1.5));
  CHECK_FALSE(family_exponents(FamilyKind::family_a, 2, 1, 0).admissible);
  CHECK_FALSE(family_exponents(FamilyKind::family_b, 3, 1, 0, 1.25, GammaRule::printed).admissible);
  CHECK(family_exponents(FamilyKind::family_b, 3, 1, 0, 1.25).exponent == doctest::Approx(1.5));
  CHECK_FALSE(family_exponents(FamilyKind::family_b, 3, 1, 0, 1.5).admissible);  // s above (2n-2k)/(n-q)
  CHECK_FALSE(family_exponents(FamilyKind::cylinder, 2, 1, 0).admissible);
  CHECK_THROWS_AS(AnalyticExample::cylinder(2, 0), AnalyticError);
}

TEST_CASE("symmetric determinant refuses the axes") {
  const AnalyticExample e = AnalyticExample::family_a(3, 1, 0);
  auto prof = e.profile();
  REQUIRE(prof);
  CHECK_THROWS_AS(symmetric_det(*prof, 0.0, 0.3), AnalyticError);
  CHECK_THROWS_AS(symmetric_det(*prof, 0.2, 0.0), AnalyticError);
  const auto [rho, r] = split_radii(Vec::LinSpaced(3, 1.0, 3.0), 1);
  CHECK(rho == doctest::Approx(std::sqrt(5.0)));
  CHECK(r == doctest::Approx(3.0));
}

TEST_CASE("chosen tau gives a subsolution") {
  for (auto e : {AnalyticExample::family_a(3, 1, 0), AnalyticExample::family_a(2, 1, 1),
                 AnalyticExample::family_b(3, 1, 1, 1.5), AnalyticExample::cylinder(2, 1)}) {
    CAPTURE(e.name());
    const double tau = choose_tau(e);
    CHECK(tau > 0);
    CHECK(e.c_sub() > 0);
    const auto pts = validity_sample(e, 200, 3);
    CHECK(subsolution_residual(e, pts).min_residual >= -1e-10);
  }
}

TEST_CASE("rescaling leaves the radial power unchanged") {
  const AnalyticExample e = AnalyticExample::radial_power(2, 1);
  const AnalyticExample r = rescale_solution(e, 0.25);
  Vec x(2);
  x << 0.3, -0.2;
  CHECK(r.value(x) == doctest::Approx(e.value(x)).epsilon(1e-12));
  CHECK(r.det_hessian(x) == doctest::Approx(e.det_hessian(x)).epsilon(1e-9));
}

TEST_CASE("evaluation outside the validity region throws") {
  AnalyticExample e = AnalyticExample::family_a(3, 1, 0);
  e.set_tau(0.25);
  CHECK_THROWS_AS(e.eval(Vec::Constant(3, 0.5)), AnalyticError);
  // The bare formula is still available just past the rim.
  const Vec x(Vec::Constant(3, 0.15));
  CHECK(e.eval_formula(x).value == e.eval(x).value);
  CHECK_NOTHROW(e.eval_formula(Vec::Constant(3, 0.26)));
}

TEST_CASE("polytope subsolution contains the square in its zero set") {
  const auto P = ConvexDomain::box(Vec::Constant(2, -0.25), Vec::Constant(2, 0.25));
  std::vector<Halfspace> cross;
  for (int m = 0; m < 4; ++m) {
    Vec nu(2);
    nu << (m & 1 ? -1.0 : 1.0), (m & 2 ? -1.0 : 1.0);
    cross.push_back(Halfspace{nu, 0.5});
  }
  const auto omega = ConvexDomain::polytope(cross);
  const AnalyticExample w = polytope_subsolution_auto(P, omega, 1.5, 1.0, 0.0, 30, 7);
  CHECK(w.zero_set_dim() >= 0);
  for (double a : {-0.24, 0.0, 0.24})
    for (double b : {-0.24, 0.1, 0.24}) {
      Vec x(2);
      x << a, b;
      CHECK(std::max(w.value(x), 0.0) == doctest::Approx(0.0));
    }
  CHECK(polytope_faces(P.halfspaces(), 2, 1).size() == 4);
  CHECK(polytope_faces(P.halfspaces(), 2, 0).size() == 4);
  const auto pts = halton_points(omega.bbox_lo(), omega.bbox_hi(), 300, [&](const Vec& x) { return omega.contains(x); }, 5);
  CHECK(subsolution_residual(w, pts).min_residual >= -1e-8);
}
