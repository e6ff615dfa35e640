#include "doctest.h"

#include "maob/solver.hpp"

#include <cmath>

using namespace maob;

namespace {

ProblemSpec disc_problem(double q, ScalarFn phi) {
  ProblemSpec p;
  p.n = 2;
  p.q = q;
  p.domain = ConvexDomain::ball(Vec::Zero(2), 1.0);
  p.dirichlet = std::move(phi);
  return p;
}

}  // namespace

TEST_CASE("problem validation") {
  ProblemSpec p = disc_problem(0.0, [](const Vec& x) { return x.squaredNorm(); });
  CHECK_NOTHROW(p.validate());
  p.q = 2.0;
  CHECK_THROWS_AS(p.validate(), SpecError);
  p.q = 0.0;
  p.dirichlet = nullptr;
  CHECK_THROWS_AS(p.validate(), SpecError);
}

TEST_CASE("discrete operator is exact on quadratics") {
  const ProblemSpec p = disc_problem(0.0, [](const Vec& x) { return 0.5 * x.squaredNorm(); });
  const Discretization d = discretize(p, 32);
  const ScalarField v = sample_field(d.mask(), p.dirichlet);
  for (std::size_t i : d.unknowns()) CHECK(ma_operator(d, v, i) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(residual_norm(v, p, d) <= 1e-9);
}

TEST_CASE("quadratic data gives the quadratic back") {
  const ProblemSpec p = disc_problem(0.0, [](const Vec& x) { return 0.5 * x.squaredNorm(); });
  const Discretization d = discretize(p, 32);
  const SolveResult r = solve_dirichlet(p, d);
  CHECK(r.report.converged);
  const ScalarField exact = sample_field(d.mask(), p.dirichlet);
  CHECK(sup_difference(r.v, exact) <= 1e-10);
}

TEST_CASE("radial power error is small and the solution is convex") {
  const AnalyticExample e = AnalyticExample::radial_power(2, 1);
  const ProblemSpec p = disc_problem(1.0, [e](const Vec& x) { return e.value(x); });
  const Discretization d = discretize(p, 32);
  const SolveResult r = solve_dirichlet(p, d);
  CHECK(r.report.converged);
  CHECK(sup_difference(r.v, sample_field(d.mask(), p.dirichlet)) <= 1e-3);
  CHECK(r.v.min_value() >= -1e-12);
}

TEST_CASE("initial guesses reach the same solution") {
  const ProblemSpec p = disc_problem(0.5, [](const Vec& x) { return 0.3 + 0.2 * x[0]; });
  const Discretization d = discretize(p, 24);
  SolverOptions a, b;
  a.init = InitialGuess::zero;
  b.init = InitialGuess::envelope;
  const SolveResult ra = solve_dirichlet(p, d, a), rb = solve_dirichlet(p, d, b);
  CHECK(sup_difference(ra.v, rb.v) <= 1e-6);
}

TEST_CASE("convex envelope of constant data is constant") {
  const ProblemSpec p = disc_problem(0.0, [](const Vec&) { return 0.7; });
  const Discretization d = discretize(p, 16);
  const ScalarField env = convex_envelope(d);
  for (std::size_t i : d.unknowns()) CHECK(env.values[i] == doctest::Approx(0.7));
}

TEST_CASE("comparison check") {
  const ProblemSpec p = disc_problem(0.0, [](const Vec& x) { return 0.5 * x.squaredNorm(); });
  const Discretization d = discretize(p, 24);
  const SolveResult r = solve_dirichlet(p, d);
  ScalarField lower = r.v;
  for (auto& x : lower.values) x -= 0.05;
  const ComparisonReport ok = check_comparison(lower, r.v, p, d);
  CHECK(ok.holds);
  CHECK(ok.max_violation <= 0);
  ScalarField higher = r.v;
  for (auto& x : higher.values) x += 0.05;
  CHECK_THROWS_AS(check_comparison(higher, r.v, p, d), SpecError);
}

TEST_CASE("frozen right-hand side") {
  const ProblemSpec p = disc_problem(1.0, [](const Vec&) { return 1.0; });
  const Discretization d = discretize(p, 8);
  std::vector<double> v(d.grid().node_count(), 0.25);
  const auto g = rhs_values(d, p, v, 0.0);
  for (std::size_t i : d.unknowns()) CHECK(g[i] == doctest::Approx(0.25));
}
