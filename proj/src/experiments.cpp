#include "maob/experiments.hpp"

#include "maob/polytope_subsolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <functional>

namespace maob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int default_nodes(int n, int res) { return res > 0 ? res : (n == 2 ? 129 : 65); }

std::string str(double x) { return fmt(x); }

double boundary_scale(const Discretization& d) {
  double s = 0;
  const Grid& g = d.grid();
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (d.mask().inside[i] && !d.is_unknown(i)) s = std::max(s, std::abs(d.dirichlet(g.point(i))));
  return s;
}

// Mask nodes satisfying a predicate.
CellSet nodes_where(const ScalarField& v, const std::function<bool(const Vec&)>& pred) {
  CellSet out;
  out.grid = v.grid;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.inside(i) && pred(v.grid.point(i))) out.members.push_back(i);
  return out;
}

// Distance to the convex flat piece spanned by a face: projection onto the
// face's principal affine hull, clamped to the face's extent.
struct FlatPiece {
  Vec center;
  Mat axes;  // n x k
  Vec lo, hi;

  static FlatPiece from(const Grid& g, const std::vector<std::size_t>& nodes, int k) {
    FlatPiece f;
    const int n = g.dim();
    f.center = Vec::Zero(n);
    for (auto m : nodes) f.center += g.point(m);
    f.center /= static_cast<double>(nodes.size());
    Mat cov = Mat::Zero(n, n);
    for (auto m : nodes) {
      const Vec d = g.point(m) - f.center;
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(cov);
    f.axes = es.eigenvectors().rightCols(k);
    f.lo = Vec::Constant(k, kInf);
    f.hi = Vec::Constant(k, -kInf);
    for (auto m : nodes) {
      const Vec c = f.axes.transpose() * (g.point(m) - f.center);
      f.lo = f.lo.cwiseMin(c);
      f.hi = f.hi.cwiseMax(c);
    }
    return f;
  }

  double distance(const Vec& x) const {
    const Vec c = (axes.transpose() * (x - center)).cwiseMax(lo).cwiseMin(hi);
    return (x - center - axes * c).norm();
  }
};

// |K| > 0 dichotomy, faces and dimension bounds shared by several runs.
void report_faces(ExperimentReport& r, const FaceDecomposition& fd, int n, double q) {
  const int bound = static_cast<int>(std::ceil((n + q) / 2.0)) - 1;
  int max_dim = 0, count = 0;
  for (const Face* f : fd.non_strictly_convex()) {
    max_dim = std::max(max_dim, flat_dimension(*f));
    ++count;
  }
  r.value("nsc_faces", count);
  r.value("nsc_max_flat_dimension", max_dim);
  r.value("positive_measure", fd.positive_measure ? 1 : 0);
  r.value("K_full_cells", static_cast<double>(fd.full_cells));
  r.check("dimension_bound", max_dim <= bound,
          "max flat dimension " + std::to_string(max_dim) + " <= ceil((n+q)/2)-1 = " + std::to_string(bound));
}

void report_section(ExperimentReport& r, const ScalarField& v, const CellSet& K, const FaceDecomposition* fd,
                    int n, double q) {
  std::optional<Halfspace> keep;
  if (fd && fd->positive_measure) {
    Vec e = Vec::Zero(n);
    e[0] = 1.0;
    keep = beyond_support(K, e);
  }
  try {
    const auto levels = default_levels(v, 8, 0.5, keep);
    FitReport f = section_scaling(v, levels, (n - q) / 2.0, 0.15, keep);
    r.fit("section", f);
    r.check("section_scaling", f.pass,
            "slope " + str(f.estimate) + " >= " + str(f.theory) + " - 0.15" + (keep ? " (beyond a supporting plane)" : ""));
  } catch (const AnalysisError& e) {
    r.check("section_scaling", false, e.what());
  }
}

bool nonincreasing(const std::vector<double>& a) {
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] > a[i - 1] * (1 + 1e-12)) return false;
  return true;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"dim-optimality", "cylinder", "polytope",
                                              "stability", "smp-failure", "solver-validation"};
  return names;
}

ExperimentConfig experiment_config(const Config& c) {
  c.require_known({"experiment.name", "experiment.n", "experiment.q", "experiment.k", "experiment.s",
                   "experiment.res", "experiment.res_2d", "experiment.res_3d", "experiment.t_list",
                   "experiment.delta_list", "experiment.base", "experiment.half_width", "experiment.m1_init",
                   "experiment.zoom", "experiment.slab", "experiment.seed", "experiment.output"});
  ExperimentConfig e;
  e.name = c.str("experiment.name");
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), e.name) == names.end())
    throw ConfigError("unknown experiment: " + e.name);
  e.n = c.integer("experiment.n", e.n);
  e.q = c.num("experiment.q", e.q);
  e.k = c.integer("experiment.k", e.k);
  e.s = c.num("experiment.s", e.s);
  e.res = c.integer("experiment.res", e.res);
  e.res_2d = c.int_list("experiment.res_2d", e.res_2d);
  e.res_3d = c.int_list("experiment.res_3d", e.res_3d);
  e.t_list = c.list("experiment.t_list", e.t_list);
  e.delta_list = c.list("experiment.delta_list", e.delta_list);
  e.base = c.str("experiment.base", e.base);
  e.half_width = c.num("experiment.half_width", e.half_width);
  e.m1_init = c.num("experiment.m1_init", e.m1_init);
  e.zoom = c.num("experiment.zoom", e.zoom);
  e.slab = c.num("experiment.slab", e.slab);
  const int seed = c.integer("experiment.seed", static_cast<int>(e.seed));
  if (seed < 0) throw ConfigError("seed must be non-negative");
  e.seed = static_cast<std::uint64_t>(seed);
  e.output = c.str("experiment.output", e.output);
  if (e.n < 2 || e.n > 3) throw ConfigError("experiments support n = 2 or 3");
  if (e.res != 0 && e.res < 5) throw ConfigError("res must be at least 5 nodes per axis");
  return e;
}

Solved solve_on_grid(const ProblemSpec& p, const std::vector<int>& nodes, const SolverOptions& opts) {
  std::vector<int> cells;
  for (int m : nodes) {
    if (m < 3) throw SpecError("need at least 3 nodes per axis");
    cells.push_back(m - 1);
  }
  Discretization d = discretize(p, cells);
  SolveResult r = solve_dirichlet(p, d, opts);
  Solved s{p, std::move(d), std::move(r), 0.0, {}};
  s.eps_K = default_eps_K(s.result.v.grid, p.q, s.result.report.final_residual);
  s.K = coincidence_set(s.result.v, s.eps_K);
  return s;
}

Solved solve_on_grid(const ProblemSpec& p, int nodes, const SolverOptions& opts) {
  return solve_on_grid(p, std::vector<int>(p.n, nodes), opts);
}

// ------------------------------------------------------------------ bases

BaseProblem polytope_base(int n, double q, int nodes, double half_width, double m1_init, std::uint64_t seed) {
  const double a = half_width;
  const ConvexDomain P = ConvexDomain::box(Vec::Constant(n, -a), Vec::Constant(n, a));
  std::vector<Halfspace> cross;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec nu(n);
    for (int i = 0; i < n; ++i) nu[i] = (mask >> i) & 1 ? -1.0 : 1.0;
    cross.push_back(Halfspace{nu, n * a});
  }
  const ConvexDomain omega = ConvexDomain::polytope(cross);
  const AnalyticExample w = polytope_subsolution_auto(P, omega, q, m1_init, 0.0, 30, seed);
  BaseProblem b;
  b.label = "polytope";
  b.spec.n = n;
  b.spec.q = q;
  b.spec.domain = omega;
  b.spec.dirichlet = [w](const Vec& x) { return std::max(w.value(x), 0.0); };
  b.nodes.assign(n, default_nodes(n, nodes));
  return b;
}

BaseProblem radial_base(int n, double q, int nodes) {
  const AnalyticExample e = AnalyticExample::radial_power(n, q);
  BaseProblem b;
  b.label = "radial";
  b.spec.n = n;
  b.spec.q = q;
  b.spec.domain = ConvexDomain::ball(Vec::Zero(n), 1.0);
  b.spec.dirichlet = [e](const Vec& x) { return e.value(x); };
  b.nodes.assign(n, default_nodes(n, nodes));
  return b;
}

BaseProblem family_a_base(int n, int k, double q, int nodes) {
  AnalyticExample e = AnalyticExample::family_a(n, k, q);
  const double tau = choose_tau(e);
  const double scale = std::pow(e.c_sub(), 1.0 / (q - n));
  BaseProblem b;
  b.label = "family-a";
  b.spec.n = n;
  b.spec.q = q;
  b.spec.domain = ConvexDomain::ball(Vec::Zero(n), tau);
  b.spec.dirichlet = [e, scale](const Vec& x) { return scale * e.value(x); };
  b.nodes.assign(n, default_nodes(n, nodes));
  return b;
}

BaseProblem disc_base(int n, double q, int nodes, double data) {
  BaseProblem b;
  b.label = "disc";
  b.spec.n = n;
  b.spec.q = q;
  b.spec.domain = ConvexDomain::ball(Vec::Zero(n), 1.0);
  b.spec.dirichlet = [data](const Vec&) { return data; };
  b.nodes.assign(n, default_nodes(n, nodes));
  return b;
}

BaseProblem make_base(const std::string& kind, const ExperimentConfig& c) {
  if (kind == "disc") return disc_base(c.n, c.q, c.res);
  if (kind == "polytope") return polytope_base(c.n, c.q, c.res, c.half_width, c.m1_init, c.seed);
  if (kind == "radial") return radial_base(c.n, c.q, c.res);
  if (kind == "family-a") return family_a_base(c.n, c.k, c.q, c.res);
  throw ConfigError("unknown base: " + kind + " (disc, polytope, radial, family-a)");
}

// ------------------------------------------------------- dim-optimality

ExperimentReport run_dim_optimality(int n, double q, int k, double s, int nodes, std::uint64_t seed, double zoom) {
  if (!(zoom >= 1)) throw SpecError("zoom must be at least 1");
  const FamilyKind kind = s == 1.0 ? FamilyKind::family_a : FamilyKind::family_b;
  const ExponentInfo info = family_exponents(kind, n, k, q, s);
  if (!info.admissible) throw SpecError("inadmissible parameters: " + info.reason);
  nodes = default_nodes(n, nodes);

  ExperimentReport r;
  r.name = "dim-optimality";
  r.echo("n", n);
  r.echo("q", q);
  r.echo("k", k);
  r.echo("s", s);
  r.echo("res", nodes);
  r.echo("seed", static_cast<double>(seed));
  r.echo("zoom", zoom);

  AnalyticExample e = kind == FamilyKind::family_a ? AnalyticExample::family_a(n, k, q)
                                                   : AnalyticExample::family_b(n, k, q, s);
  const double tau = choose_tau(e) / zoom;
  const double c = e.c_sub();
  const double scale = std::pow(c, 1.0 / (q - n));
  r.value("tau", tau);
  r.value("c_sub", c);
  r.value("exponent", info.exponent);

  ProblemSpec p;
  p.n = n;
  p.q = q;
  p.domain = ConvexDomain::ball(Vec::Zero(n), tau);
  p.dirichlet = [e, scale](const Vec& x) { return scale * e.value(x); };
  Solved sol = solve_on_grid(p, nodes);
  const SolveReport& rep = sol.result.report;
  r.value("outer_iters", rep.outer_iters);
  r.value("final_residual", rep.final_residual);
  r.value("wall_time", rep.wall_time);
  r.check("solver_converged", rep.converged);

  // (a) comparison with the scaled subsolution.
  const ScalarField sub = sample_field(sol.disc.mask(), p.dirichlet);
  const ComparisonReport cmp = check_comparison(sub, sol.result.v, p, sol.disc);
  r.value("comparison_slack", cmp.slack);
  r.value("comparison_max_violation", cmp.max_violation);
  r.check("v_above_subsolution", cmp.holds,
          "max(sub - v) " + str(cmp.max_violation) + " <= slack " + str(cmp.slack));

  // Everything else on the unit ball.
  const ScalarField v = rescale_solution(sol.result.v, tau, q);
  const ConvexDomain unit = ConvexDomain::ball(Vec::Zero(n), 1.0);
  const double h = v.grid.max_h();
  // MA residuals pick up tau^{-q alpha} under the rescaling.
  const double res_unit = rep.final_residual * std::pow(tau, -2.0 * n * q / (n - q));
  const double eps = default_eps_K(v.grid, q, res_unit);
  const CellSet K = coincidence_set(v, eps);
  r.value("eps_K", eps);
  r.value("K_nodes", static_cast<double>(K.size()));

  // (b) K is the R^k slab (last k axes).
  const CellSet K_exact = nodes_where(v, [&](const Vec& x) { return x.head(n - k).norm() <= 1e-9; });
  const double hd = hausdorff_distance(K, K_exact);
  r.value("hausdorff_K_slab", hd);
  r.check("K_is_slab", hd <= 2 * h + 1e-12, "Hausdorff " + str(hd) + " <= 2h = " + str(2 * h));
  if (K.empty()) {
    r.skip("growth_exponent", "empty coincidence set");
    r.skip("flat_dimension", "empty coincidence set");
    return r;
  }

  // (c) growth exponent.
  GrowthOptions go;
  go.theory = s;
  go.tolerance = s > 1.0 ? 0.15 : 0.1;
  go.domain = &unit;
  go.core_margin = 0.25;
  try {
    const FitReport g = growth_exponent(v, K, go);
    r.fit("growth", g);
    r.check("growth_exponent", g.pass, "slope " + str(g.estimate) + " vs s = " + str(s));
  } catch (const AnalysisError& ex) {
    r.check("growth_exponent", false, ex.what());
  }

  // (d) flat dimension and the bounds on it.
  const FaceDecomposition fd = classify_gamma(K, unit);
  report_faces(r, fd, n, q);
  int dim = -1;
  for (const Face* f : fd.non_strictly_convex()) dim = std::max(dim, flat_dimension(*f));
  r.check("flat_dimension", dim == k, "max Gamma_nsc flat dimension " + std::to_string(dim) + " vs k = " + std::to_string(k));
  if (kind == FamilyKind::family_b) {
    const double bound = n - (n - q) * s / 2 + 0.5;
    r.check("dimension_bound_s", dim <= bound, std::to_string(dim) + " <= n - (n-q)s/2 + 0.5 = " + str(bound));
  }

  // (e) section scaling.
  report_section(r, v, K, &fd, n, q);
  return r;
}

// ------------------------------------------------------------- cylinder

ExperimentReport run_cylinder(int n, double q, int nodes, std::vector<double> deltas, double slab) {
  if (!(q > 0)) throw SpecError("requires q > 0");
  if (nodes <= 0) nodes = n == 2 ? 513 : 241;
  AnalyticExample e = AnalyticExample::cylinder(n, q);
  const double tau = choose_tau(e);
  const double c = e.c_sub();
  const double scale = std::pow(c, 1.0 / (q - n));
  // Uniform spacing; the slab {|x_n| <= slab} only needs a few layers.
  const double h = 2.0 / (nodes - 1);
  if (!(slab > 0)) slab = std::min(tau, n == 2 ? 0.125 : 1.0 / 32);
  slab = std::min(slab, tau);
  const int layers = std::max(2, static_cast<int>(std::lround(slab / h)));
  slab = layers * h;

  ExperimentReport r;
  r.name = "cylinder";
  r.echo("n", n);
  r.echo("q", q);
  r.echo("res", nodes);
  r.echo("slab", slab);
  r.value("tau", tau);
  r.value("c_sub", c);

  ProblemSpec p;
  p.n = n;
  p.q = q;
  Vec lo = Vec::Constant(n, -1.0), hi = Vec::Constant(n, 1.0);
  lo[n - 1] = -slab;
  hi[n - 1] = slab;
  p.domain = ConvexDomain::box(lo, hi);
  p.dirichlet = [e, scale](const Vec& x) { return scale * e.value(x); };
  std::vector<int> res(n, nodes);
  res[n - 1] = 2 * layers + 1;
  Solved sol = solve_on_grid(p, res);
  const SolveReport& rep = sol.result.report;
  r.value("outer_iters", rep.outer_iters);
  r.value("final_residual", rep.final_residual);
  r.value("wall_time", rep.wall_time);
  r.check("solver_converged", rep.converged);

  const ScalarField& v = sol.result.v;
  const CellSet& K = sol.K;
  r.value("eps_K", sol.eps_K);
  const CellSet K_exact = nodes_where(v, [&](const Vec& x) { return x.head(n - 1).norm() <= 0.5 + 1e-9; });
  const double hd = hausdorff_distance(K, K_exact);
  r.value("hausdorff_K_cylinder", hd);
  r.check("K_is_cylinder", hd <= 2 * h + 1e-12, "Hausdorff " + str(hd) + " <= 2h = " + str(2 * h));
  if (K.empty()) {
    r.skip("gamma_nsc_dimension", "empty coincidence set");
    return r;
  }

  const FaceDecomposition fd = classify_gamma(K, p.domain);
  report_faces(r, fd, n, q);
  const int gdim = gamma_nsc_dimension(fd);
  r.value("gamma_nsc_dimension", gdim);
  r.check("gamma_nsc_dimension", gdim == n - 1, std::to_string(gdim) + " vs n - 1 = " + std::to_string(n - 1));

  // One decade of distances from 3h; the d^{(q+2)/2} term biases wider windows upward.
  GrowthOptions go;
  go.theory = 1.0;
  go.tolerance = 0.1;
  for (int i = 0; i <= 10; ++i) go.shells.push_back(3 * h * std::pow(10.0, i / 10.0));
  try {
    const FitReport g = growth_exponent(v, K, go);
    r.fit("growth", g);
    r.check("growth_exponent", g.pass, "slope " + str(g.estimate) + " vs 1");
  } catch (const AnalysisError& ex) {
    r.check("growth_exponent", false, ex.what());
  }

  // Collar integrals around Gamma_nsc, with the smooth quadratic as control.
  const std::vector<std::size_t> face = fd.nsc_nodes();
  // Halving from 0.4: wider collars reach the axis of K or the box.
  if (deltas.empty())
    for (double d = 0.4; d >= 3 * h; d /= 2) deltas.push_back(d);
  std::vector<double> usable;
  for (double d : deltas)
    if (d >= 3 * h) usable.push_back(d);
  r.echo("delta_list", fmt(usable));
  if (face.empty() || usable.size() < 3) {
    r.check("collar_plateau", false, face.empty() ? "no Gamma_nsc face" : "fewer than 3 resolvable deltas");
  } else {
    const std::vector<double> col = collar_integral(v, face, usable);
    const ScalarField smooth = sample_field(sol.disc.mask(), [](const Vec& x) { return 0.5 * x.squaredNorm(); });
    const std::vector<double> ctl = collar_integral(smooth, face, usable);
    r.trace("collar", col);
    r.trace("collar_control", ctl);
    const double ratio = col.back() / col[1];
    const double ctl_ratio = ctl.back() / ctl.front();
    r.value("collar_plateau_ratio", ratio);
    r.value("collar_control_ratio", ctl_ratio);
    r.check("collar_plateau", nonincreasing(col) && ratio >= 0.5 && col.back() > 0,
            "final / second = " + str(ratio) + " >= 0.5");
    r.check("collar_control_decays", ctl_ratio < 0.1, "control final / first = " + str(ctl_ratio) + " < 0.1");
  }
  report_section(r, v, K, &fd, n, q);
  return r;
}

// -------------------------------------------------------------- polytope

ExperimentReport run_polytope(int n, double q, int nodes, double half_width, double m1_init, std::uint64_t seed) {
  if (!(n + q > 2)) throw SpecError("requires n + q > 2");
  const BaseProblem base = polytope_base(n, q, nodes, half_width, m1_init, seed);
  const int k = static_cast<int>(std::ceil((n + q) / 2.0)) - 1;
  const double a = half_width;
  const ConvexDomain P = ConvexDomain::box(Vec::Constant(n, -a), Vec::Constant(n, a));

  ExperimentReport r;
  r.name = "polytope";
  r.echo("n", n);
  r.echo("q", q);
  r.echo("res", base.nodes.front());
  r.echo("P", P.describe());
  r.echo("omega", base.spec.domain.describe());
  r.echo("m1_init", m1_init);
  r.value("k", k);

  Solved sol = solve_on_grid(base.spec, base.nodes);
  const SolveReport& rep = sol.result.report;
  r.value("outer_iters", rep.outer_iters);
  r.value("final_residual", rep.final_residual);
  r.value("wall_time", rep.wall_time);
  r.check("solver_converged", rep.converged);

  const ScalarField& v = sol.result.v;
  const double h = v.grid.max_h();
  const CellSet& K = sol.K;
  const CellSet inP = nodes_where(v, [&](const Vec& x) { return P.contains(x, 1e-12); });
  std::size_t missing = 0;
  for (auto m : inP.members)
    if (!K.contains(m)) ++missing;
  r.value("P_nodes_outside_K", static_cast<double>(missing));
  r.check("P_subset_K", missing == 0 && !inP.empty(), std::to_string(missing) + " nodes of P outside K");

  const ScalarField w = sample_field(sol.disc.mask(), base.spec.dirichlet);
  const ComparisonReport cmp = check_comparison(w, v, base.spec, sol.disc);
  r.value("comparison_slack", cmp.slack);
  r.check("v_above_w", cmp.holds, "max(w - v) " + str(cmp.max_violation) + " <= slack " + str(cmp.slack));

  if (K.empty()) {
    r.check("positive_measure", false, "empty coincidence set");
    return r;
  }
  const FaceDecomposition fd = classify_gamma(K, base.spec.domain);
  report_faces(r, fd, n, q);
  r.check("positive_measure", fd.positive_measure, std::to_string(fd.full_cells) + " full cells");

  // Gamma_nsc faces against the k-skeleton of P.
  const auto skeleton = polytope_faces(P.halfspaces(), n, k);
  std::vector<CellSet> pieces;
  for (const auto& face : skeleton) {
    Mat span(n, static_cast<int>(face.size()) - 1);
    for (std::size_t i = 1; i < face.size(); ++i) span.col(static_cast<int>(i) - 1) = face[i] - face[0];
    // Nodes within h/2 of the face: close to its affine hull and inside the slightly grown polytope.
    const AffineSubspace aff = AffineSubspace::from_span(face[0], span);
    pieces.push_back(nodes_where(v, [&](const Vec& x) {
      return dist_to_subspace(x, aff) <= 0.5 * h && P.boundary_distance(x) >= -0.5 * h;
    }));
  }
  const auto nsc = fd.non_strictly_convex();
  std::vector<int> matched(skeleton.size(), 0);
  int unmatched_faces = 0;
  for (const Face* f : nsc) {
    CellSet fs;
    fs.grid = v.grid;
    fs.members = f->nodes;
    bool hit = false;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      if (hausdorff_distance(fs, pieces[j]) <= 2 * h + 1e-12) {
        ++matched[j];
        hit = true;
      }
    }
    if (!hit) ++unmatched_faces;
  }
  const bool all = std::all_of(matched.begin(), matched.end(), [](int m) { return m >= 1; });
  r.value("skeleton_faces", static_cast<double>(skeleton.size()));
  r.value("nsc_unmatched", unmatched_faces);
  r.check("nsc_is_skeleton", all && unmatched_faces == 0,
          std::to_string(nsc.size()) + " Gamma_nsc faces for " + std::to_string(skeleton.size()) + " skeleton faces, " +
              std::to_string(unmatched_faces) + " unmatched");
  bool sc = false;
  for (const auto& f : fd.faces)
    if (f.kind == FaceKind::strictly_convex && !f.on_domain_boundary) sc = true;
  r.value("has_strictly_convex_part", sc ? 1 : 0);

  GrowthOptions go;
  go.theory = 1.0;
  go.tolerance = 0.1;
  try {
    const FitReport g = growth_exponent(v, K, go);
    r.fit("growth", g);
    r.check("growth_exponent", g.pass, "slope " + str(g.estimate) + " vs 1");
  } catch (const AnalysisError& ex) {
    r.check("growth_exponent", false, ex.what());
  }
  report_section(r, v, K, &fd, n, q);
  return r;
}

// ------------------------------------------------------------- stability

ExperimentReport run_stability(const BaseProblem& base, std::vector<double> t_list) {
  if (t_list.empty()) t_list = {0.1, 0.05, 0.01};
  ExperimentReport r;
  r.name = "stability";
  r.echo("base", base.label);
  r.echo("n", base.spec.n);
  r.echo("q", base.spec.q);
  r.echo("res", base.nodes.front());
  r.echo("t_list", fmt(t_list));

  Solved b = solve_on_grid(base.spec, base.nodes);
  if (b.K.empty()) throw SpecError("nothing to perturb");
  const double scale = boundary_scale(b.disc);
  const double h = b.result.v.grid.max_h();
  const FaceDecomposition fd = classify_gamma(b.K, base.spec.domain);
  r.value("positive_measure", fd.positive_measure ? 1 : 0);
  r.value("K_nodes", static_cast<double>(b.K.size()));
  r.value("data_scale", scale);
  r.check("base_converged", b.result.report.converged);

  std::vector<double> dist, sizes;
  for (double t : t_list) {
    ProblemSpec pt = base.spec;
    const auto phi = base.spec.dirichlet;
    const double shift = t * scale;
    pt.dirichlet = [phi, shift](const Vec& x) { return phi(x) + shift; };
    Solved st = solve_on_grid(pt, base.nodes);
    // Same threshold as the base so that K_t and K are comparable.
    const CellSet Kt = coincidence_set(st.result.v, b.eps_K);
    dist.push_back(hausdorff_distance(Kt, b.K));
    sizes.push_back(static_cast<double>(Kt.size()));
  }
  r.trace("hausdorff", dist);
  r.trace("K_t_nodes", sizes);

  // t = 0 control.
  {
    Solved s0 = solve_on_grid(base.spec, base.nodes);
    const CellSet K0 = coincidence_set(s0.result.v, b.eps_K);
    r.check("identity_control", K0.members == b.K.members, "K_0 == K");
  }

  if (fd.positive_measure) {
    const bool mono = nonincreasing(dist);
    r.check("hausdorff_monotone", mono, fmt(dist));
    r.check("hausdorff_final", dist.back() <= 2 * h + 1e-12, str(dist.back()) + " <= 2h = " + str(2 * h));
  } else {
    bool empty = true;
    for (double s : sizes) empty = empty && s == 0;
    r.check("K_t_empty", empty, "K_t sizes " + fmt(sizes));
  }
  return r;
}

// ----------------------------------------------------------- smp-failure

ExperimentReport run_smp_failure(const BaseProblem& base, std::vector<double> t_list) {
  if (t_list.empty()) t_list = {0.05, 0.025, 0.0125};
  ExperimentReport r;
  r.name = "smp-failure";
  r.echo("base", base.label);
  r.echo("n", base.spec.n);
  r.echo("q", base.spec.q);
  r.echo("res", base.nodes.front());
  r.echo("t_list", fmt(t_list));

  Solved b = solve_on_grid(base.spec, base.nodes);
  if (b.K.empty()) throw SpecError("nothing to perturb");
  const FaceDecomposition fd = classify_gamma(b.K, base.spec.domain);
  const Face* E = nullptr;
  for (const Face* f : fd.non_strictly_convex())
    if (!E || f->nodes.size() > E->nodes.size()) E = f;
  if (!E) throw SpecError("E not a Sigma_v face");
  const FlatPiece piece = FlatPiece::from(b.result.v.grid, E->nodes, flat_dimension(*E));
  const double scale = boundary_scale(b.disc);
  r.value("E_nodes", static_cast<double>(E->nodes.size()));
  r.value("E_dimension", flat_dimension(*E));
  r.value("data_scale", scale);
  r.check("base_converged", b.result.report.converged);

  const ScalarField& v = b.result.v;
  std::vector<double> consts, pin, slacks;
  bool comparison = true, inside = true;
  for (double t : t_list) {
    ProblemSpec pt = base.spec;
    const auto phi = base.spec.dirichlet;
    const double tt = t * scale;
    pt.dirichlet = [phi, tt, piece](const Vec& x) { return phi(x) + tt * piece.distance(x); };
    Solved st = solve_on_grid(pt, base.nodes);
    const ComparisonReport cmp = check_comparison(v, st.result.v, base.spec, pt, b.disc, st.disc);
    comparison = comparison && cmp.holds;
    const double sup = sup_difference(st.result.v, v);
    consts.push_back(sup / tt);
    double on_e = 0;
    for (auto m : E->nodes) on_e = std::max(on_e, std::abs(st.result.v.values[m] - v.values[m]));
    pin.push_back(on_e);
    slacks.push_back(cmp.slack);
    const CellSet Kt = coincidence_set(st.result.v, b.eps_K);
    for (auto m : E->nodes) inside = inside && Kt.contains(m);
  }
  r.trace("sup_over_t", consts);
  r.trace("pinning_on_E", pin);
  r.trace("slack", slacks);

  std::vector<double> sorted = consts;
  std::sort(sorted.begin(), sorted.end());
  const double med = sorted[sorted.size() / 2];
  bool stable = med > 0;
  for (double c : consts) stable = stable && std::abs(c / med - 1) <= 0.5;
  r.check("uniform_linear_in_t", stable, "sup|v_t - v| / t = " + fmt(consts));
  r.check("comparison", comparison);
  bool pinned = true;
  for (std::size_t i = 0; i < pin.size(); ++i) pinned = pinned && pin[i] <= 3 * slacks[i];
  r.check("pinned_on_E", pinned, "max |v_t - v| on E = " + fmt(pin));
  r.check("E_in_K_t", inside);

  // Constant perturbation: no pinning.
  {
    const double tt = t_list.front() * scale;
    ProblemSpec pc = base.spec;
    const auto phi = base.spec.dirichlet;
    pc.dirichlet = [phi, tt](const Vec& x) { return phi(x) + tt; };
    Solved sc = solve_on_grid(pc, base.nodes);
    const ComparisonReport cmp = check_comparison(v, sc.result.v, base.spec, pc, b.disc, sc.disc);
    double lift = kInf;
    for (auto m : E->nodes) lift = std::min(lift, sc.result.v.values[m] - v.values[m]);
    r.value("control_min_lift_on_E", lift);
    r.check("control_not_pinned", lift > 3 * cmp.slack, "min (v_t - v) on E = " + str(lift));
  }
  return r;
}

// ------------------------------------------------------ solver-validation

ExperimentReport run_solver_validation(const std::vector<int>& res_2d, const std::vector<int>& res_3d,
                                       std::uint64_t seed) {
  ExperimentReport r;
  r.name = "solver-validation";
  r.echo("res_2d", [&] {
    std::vector<double> a(res_2d.begin(), res_2d.end());
    return fmt(a);
  }());
  r.echo("res_3d", [&] {
    std::vector<double> a(res_3d.begin(), res_3d.end());
    return fmt(a);
  }());
  r.echo("seed", static_cast<double>(seed));
  const auto t0 = std::chrono::steady_clock::now();

  struct Case {
    int n;
    double q;
  };
  const std::vector<Case> cases{{2, 0.0}, {2, 1.0}, {2, 0.5}, {3, 1.0}};
  for (const Case& c : cases) {
    const BaseProblem b = radial_base(c.n, c.q, 5);
    const AnalyticExample ex = AnalyticExample::radial_power(c.n, c.q);
    const auto& list = c.n == 2 ? res_2d : res_3d;
    std::vector<double> errs, scales;
    const std::string tag = "n" + std::to_string(c.n) + "_q" + str(c.q);
    for (int m : list) {
      Solved s = solve_on_grid(b.spec, m);
      const ScalarField exact = sample_field(s.disc.mask(), [&](const Vec& x) { return ex.value(x); });
      errs.push_back(sup_difference(s.result.v, exact));
      scales.push_back(std::max(exact.max_value(), 1e-300));
      if (!s.result.report.converged) r.check("converged_" + tag + "_" + std::to_string(m), false);
      // Discrete convexity along every stencil direction.
      double worst = 0;
      for (auto i : s.disc.unknowns())
        for (int j = 0; j < s.disc.direction_count(); ++j)
          worst = std::min(worst, s.disc.second_difference(s.result.v.values, i, j));
      const double allowed = -10 * std::pow(s.result.report.final_residual, 1.0 / c.n);
      if (worst < allowed - 1e-12)
        r.check("convex_" + tag + "_" + std::to_string(m), false, str(worst) + " < " + str(allowed));
    }
    r.trace("error_" + tag, errs);
    bool ok = true;
    std::vector<double> ratios;
    for (std::size_t i = 1; i < errs.size(); ++i) {
      const double floor = 1e-10 * scales[i];
      const double ratio = errs[i] <= floor && errs[i - 1] <= floor ? 0.0 : errs[i] / errs[i - 1];
      ratios.push_back(ratio);
      ok = ok && ratio <= 0.75;
    }
    r.trace("ratio_" + tag, ratios);
    r.check("convergence_" + tag, ok, "ratios " + fmt(ratios) + " (0 marks both errors at the rounding floor)");
  }

  // Comparison principle on randomized ordered boundary pairs.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const Case& c : std::vector<Case>{{2, 0.0}, {2, 1.0}, {2, 0.5}}) {
    const BaseProblem b = radial_base(c.n, c.q, 33);
    Solved base = solve_on_grid(b.spec, b.nodes);
    const double scale = boundary_scale(base.disc);
    int held = 0;
    double worst = -kInf;
    for (int pair = 0; pair < 10; ++pair) {
      const double amp = 0.2 * scale * U(rng), tilt = 0.2 * scale * U(rng);
      const double th = 2 * M_PI * U(rng);
      Vec dir = Vec::Zero(c.n);
      dir[0] = std::cos(th);
      dir[1] = std::sin(th);
      ProblemSpec up = b.spec;
      const auto phi = b.spec.dirichlet;
      up.dirichlet = [phi, amp, tilt, dir](const Vec& x) { return phi(x) + amp + tilt * (1 + dir.dot(x)); };
      Solved hi = solve_on_grid(up, b.nodes);
      const ComparisonReport cmp = check_comparison(base.result.v, hi.result.v, b.spec, up, base.disc, hi.disc);
      if (cmp.holds) ++held;
      worst = std::max(worst, cmp.max_violation - cmp.slack);
    }
    const std::string tag = "n" + std::to_string(c.n) + "_q" + str(c.q);
    r.value("comparison_worst_excess_" + tag, worst);
    r.check("comparison_" + tag, held == 10, std::to_string(held) + "/10 pairs");
  }

  // Uniqueness proxy: zero and envelope initial guesses.
  {
    const BaseProblem b = radial_base(2, 1.0, 33);
    SolverOptions oz;
    oz.init = InitialGuess::zero;
    Solved a = solve_on_grid(b.spec, b.nodes);
    Solved z = solve_on_grid(b.spec, b.nodes, oz);
    const double tol = 1e-7 * boundary_scale(a.disc);
    const double diff = sup_difference(a.result.v, z.result.v);
    r.value("initialisation_difference", diff);
    r.check("initialisation_independent", diff <= 10 * tol, str(diff) + " <= 10 tol_outer = " + str(10 * tol));
  }

  // Negative control: wrong exponent.
  {
    const BaseProblem b = radial_base(2, 1.0, 65);
    const int cells = 64;
    Discretization d = discretize(b.spec, cells);
    const AnalyticExample ex = AnalyticExample::radial_power(2, 1.0);
    const ScalarField good = sample_field(d.mask(), [&](const Vec& x) { return ex.value(x); });
    const ScalarField bad = sample_field(d.mask(), [](const Vec& x) { return std::pow(x.norm(), 3) / 48.0; });
    const double rg = residual_norm(good, b.spec, d), rb = residual_norm(bad, b.spec, d);
    r.value("residual_exact_field", rg);
    r.value("residual_wrong_exponent", rb);
    r.check("negative_control_flagged", rb > 10 * rg, str(rb) + " > 10 * " + str(rg));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.value("wall_time", wall);
  return r;
}

ExperimentReport run_experiment(const ExperimentConfig& c) {
  if (c.name == "dim-optimality") return run_dim_optimality(c.n, c.q, c.k, c.s, c.res, c.seed, c.zoom);
  if (c.name == "cylinder") return run_cylinder(c.n, c.q, c.res, c.delta_list, c.slab);
  if (c.name == "polytope") return run_polytope(c.n, c.q, c.res, c.half_width, c.m1_init, c.seed);
  if (c.name == "stability") return run_stability(make_base(c.base.empty() ? "disc" : c.base, c), c.t_list);
  if (c.name == "smp-failure") return run_smp_failure(make_base(c.base.empty() ? "family-a" : c.base, c), c.t_list);
  if (c.name == "solver-validation") return run_solver_validation(c.res_2d, c.res_3d, c.seed);
  throw ConfigError("unknown experiment: " + c.name);
}

}  // namespace maob
