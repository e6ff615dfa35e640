#include "maob/analytic.hpp"
#include "maob/config.hpp"
#include "maob/experiments.hpp"
#include "maob/field_io.hpp"
#include "maob/free_boundary.hpp"
#include "maob/report.hpp"
#include "maob/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace maob;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Analytic family by name with its natural domain and boundary scaling
// c^{1/(q-n)}.
struct Family {
  AnalyticExample example;
  ConvexDomain domain;
  double scale = 1.0;
};

Family make_family(const std::string& name, int n, int k, double q, double s, const std::string& gamma) {
  const GammaRule rule = gamma == "printed" ? GammaRule::printed : GammaRule::balanced;
  if (gamma != "printed" && gamma != "balanced") throw UsageError("gamma must be balanced or printed");
  if (name == "radial" || name == "quadratic") {
    if (name == "quadratic" && q != 0) throw UsageError("quadratic requires q = 0");
    AnalyticExample e = AnalyticExample::radial_power(n, q);
    return {e, ConvexDomain::ball(Vec::Zero(n), 1.0), 1.0};
  }
  std::optional<AnalyticExample> e;
  FamilyKind kind;
  if (name == "family-a") {
    kind = FamilyKind::family_a;
    e = AnalyticExample::family_a(n, k, q);
  } else if (name == "family-b") {
    kind = FamilyKind::family_b;
    e = AnalyticExample::family_b(n, k, q, s, rule);
  } else if (name == "cylinder") {
    kind = FamilyKind::cylinder;
    e = AnalyticExample::cylinder(n, q);
  } else {
    throw UsageError("unknown family: " + name + " (quadratic, radial, family-a, family-b, cylinder)");
  }
  const ExponentInfo info = family_exponents(kind, n, k, q, s, rule);
  if (!info.admissible) throw SpecError("inadmissible parameters: " + info.reason);
  const double tau = choose_tau(*e);
  const double scale = std::pow(e->c_sub(), 1.0 / (q - n));
  if (kind == FamilyKind::cylinder) {
    Vec lo = Vec::Constant(n, -1.0), hi = Vec::Constant(n, 1.0);
    lo[n - 1] = -tau;
    hi[n - 1] = tau;
    return {*e, ConvexDomain::box(lo, hi), scale};
  }
  return {*e, ConvexDomain::ball(Vec::Zero(n), tau), scale};
}

ConvexDomain parse_domain(const std::string& text, int n) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const double r = colon == std::string::npos ? 1.0 : std::stod(text.substr(colon + 1));
  if (!(r > 0)) throw UsageError("domain size must be positive");
  if (kind == "ball") return ConvexDomain::ball(Vec::Zero(n), r);
  if (kind == "box") return ConvexDomain::box(Vec::Constant(n, -r), Vec::Constant(n, r));
  if (kind == "cross") {
    std::vector<Halfspace> hs;
    for (int m = 0; m < (1 << n); ++m) {
      Vec nu(n);
      for (int i = 0; i < n; ++i) nu[i] = (m >> i) & 1 ? -1.0 : 1.0;
      hs.push_back(Halfspace{nu, r});
    }
    return ConvexDomain::polytope(hs);
  }
  throw UsageError("unknown domain: " + text + " (ball:R, box:A, cross:R)");
}

int exit_for(bool pass) { return pass ? 0 : 1; }

// ------------------------------------------------------------------ solve

int cmd_solve(const std::string& path) {
  const Config c = Config::load(path);
  c.require_known({"problem.n", "problem.q", "problem.k", "problem.s", "problem.gamma", "problem.boundary",
                   "problem.domain", "problem.g", "problem.shift", "problem.res", "solver.outer", "solver.inner",
                   "solver.init", "solver.tol_outer", "solver.max_outer", "solver.width", "output.field",
                   "output.report"});
  const int n = c.integer("problem.n", 2);
  const double q = c.num("problem.q", 0.0);
  const int nodes = c.integer("problem.res", n == 2 ? 129 : 65);
  if (nodes < 5) throw ConfigError("res must be at least 5 nodes per axis");
  Family fam = make_family(c.str("problem.boundary", "radial"), n, c.integer("problem.k", 1), q,
                           c.num("problem.s", 1.0), c.str("problem.gamma", "balanced"));
  ProblemSpec p;
  p.n = n;
  p.q = q;
  p.domain = c.has("problem.domain") ? parse_domain(c.str("problem.domain"), n) : fam.domain;
  const double g = c.num("problem.g", 1.0);
  if (!(g > 0)) throw ConfigError("g must be positive");
  p.g = [g](const Vec&) { return g; };
  p.g_min = p.g_max = g;
  const double shift = c.num("problem.shift", 0.0);
  const AnalyticExample e = fam.example;
  const double scale = fam.scale;
  const ConvexDomain natural = fam.domain;
  p.dirichlet = [e, scale, shift](const Vec& x) { return scale * e.value(x) + shift; };
  p.tol_outer = c.num("solver.tol_outer", 0.0);
  p.max_outer = c.integer("solver.max_outer", p.max_outer);
  p.validate();

  SolverOptions o;
  const std::string outer = c.str("solver.outer", "coupled"), inner = c.str("solver.inner", "policy"),
                    init = c.str("solver.init", "envelope");
  if (outer == "picard") o.outer = OuterMethod::picard;
  else if (outer != "coupled") throw ConfigError("solver.outer must be coupled or picard");
  if (inner == "jacobi") o.inner = InnerMethod::jacobi;
  else if (inner != "policy") throw ConfigError("solver.inner must be policy or jacobi");
  if (init == "zero") o.init = InitialGuess::zero;
  else if (init != "envelope") throw ConfigError("solver.init must be envelope or zero");

  std::vector<int> cells(n, nodes - 1);
  Discretization d = discretize(p, cells, c.integer("solver.width", 0));
  const SolveResult r = solve_dirichlet(p, d, o);
  const SolveReport& rep = r.report;

  ExperimentReport out;
  out.name = "solve";
  for (const auto& [k, v] : c.entries()) out.echo(k, v);
  out.value("stencil_width", d.stencil().width);
  out.value("outer_iters", rep.outer_iters);
  out.value("inner_iters", static_cast<double>(rep.inner_iters));
  out.value("final_residual", rep.final_residual);
  out.value("min_value", rep.min_value);
  out.value("wall_time", rep.wall_time);
  out.trace("update_history", rep.update_history);
  out.trace("residual_history", rep.residual_history);
  std::string flags;
  for (const auto& f : rep.flags) flags += (flags.empty() ? "" : " ") + f;
  out.check("converged", rep.converged, flags);
  if (p.domain.describe() == natural.describe() && shift == 0 && g == 1.0) {
    // Boundary data of an exact solution: report the error as well.
    if (e.kind() == FamilyKind::radial_power) {
      const ScalarField exact = sample_field(d.mask(), [&](const Vec& x) { return e.value(x); });
      out.value("sup_error_vs_exact", sup_difference(r.v, exact));
    }
  }
  const double eps = default_eps_K(r.v.grid, q, rep.final_residual);
  out.value("eps_K", eps);
  out.value("K_nodes", static_cast<double>(coincidence_set(r.v, eps).size()));
  const std::string field = c.str("output.field", "");
  if (!field.empty()) {
    write_field(field, r.v, q);
    out.artifacts.push_back(field);
  }
  const std::string dir = c.str("output.report", "");
  if (!dir.empty()) write_report(out, dir);
  std::cout << to_text(out);
  return exit_for(out.pass());
}

// ---------------------------------------------------------------- example

int cmd_example(const std::string& family, int n, int k, double q, double s, const std::string& gamma, int nodes,
                bool emit, const std::string& out_path, std::uint64_t seed) {
  Family fam = make_family(family, n, k, q, s, gamma);
  const AnalyticExample& e = fam.example;
  if (!emit) {
    ExperimentReport r;
    r.name = "example";
    r.echo("family", family);
    r.echo("n", n);
    r.echo("k", k);
    r.echo("q", q);
    r.echo("s", s);
    r.echo("gamma", gamma);
    const ExponentInfo info = e.exponents();
    r.value("exponent", info.exponent);
    r.value("growth_order", info.s_effective);
    r.value("tau", std::isfinite(e.tau()) ? e.tau() : 1.0);
    r.value("c_sub", e.c_sub());
    const auto pts = validity_sample(e, 200, seed);
    double worst = 0;
    for (const Vec& x : pts) {
      const double a = e.det_hessian(x);
      const double b = fd_hessian_det([&](const Vec& y) { return e.eval_formula(y).value; }, x, fd_step(e, x));
      worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
    }
    r.value("det_fd_max_relative_error", worst);
    r.check("det_matches_fd", worst <= 1e-4);
    if (e.kind() != FamilyKind::polytope_sub) {
      double shown = 0;
      for (const Vec& x : pts) {
        const double a = e.displayed_det(x);
        const double b = e.det_hessian(x);
        shown = std::max(shown, std::abs(a - b) / std::max(std::abs(b), 1e-300));
      }
      r.value("displayed_det_max_relative_error", shown);
      r.check("displayed_det_matches", shown <= 1e-4,
              shown <= 1e-4 ? "" : "closed form disagrees with the Hessian determinant");
    }
    const ResidualResult res = subsolution_residual(e, pts);
    r.value("subsolution_residual", res.min_residual);
    r.check("subsolution", res.min_residual >= -1e-10);
    std::cout << to_text(r);
    return exit_for(r.pass());
  }
  const GridMask gm = make_grid(fam.domain, std::vector<int>(n, nodes - 1));
  const double scale = fam.scale;
  const ScalarField v = sample_field(gm, [&](const Vec& x) { return scale * e.value(x); });
  if (out_path.empty() || out_path == "-") write_field(std::cout, v, q);
  else write_field(out_path, v, q);
  return 0;
}

// ---------------------------------------------------------------- analyze

ConvexDomain guess_domain(const ScalarField& v) {
  const Grid& g = v.grid;
  const int n = g.dim();
  Vec lo(n), hi(n);
  for (int a = 0; a < n; ++a) {
    lo[a] = g.lo()[a];
    hi[a] = g.hi()[a];
  }
  // A box fills the grid; anything else is taken as the inscribed ball.
  if (v.inside(0) && v.inside(v.size() - 1)) return ConvexDomain::box(lo, hi);
  return ConvexDomain::ball((lo + hi) / 2, (hi - lo).minCoeff() / 2);
}

int cmd_analyze(const std::string& path, const std::string& fit, const std::string& domain_text, double theory,
                double eps_override, const std::string& out_dir) {
  const FieldFile ff = read_field(path);
  const ScalarField& v = ff.field;
  const int n = v.grid.dim();
  const double q = ff.q;
  const ConvexDomain domain = domain_text.empty() ? guess_domain(v) : parse_domain(domain_text, n);

  ExperimentReport r;
  r.name = "analyze";
  r.echo("field", path);
  r.echo("fit", fit.empty() ? "none" : fit);
  r.echo("domain", domain.describe());
  const double eps = eps_override > 0 ? eps_override : default_eps_K(v.grid, q, 0.0);
  const CellSet K = coincidence_set(v, eps);
  r.value("eps_K", eps);
  r.value("K_nodes", static_cast<double>(K.size()));
  std::optional<FaceDecomposition> fd;
  if (!K.empty()) {
    fd = classify_gamma(K, domain);
    int count = 0, dim = 0;
    for (const Face* f : fd->non_strictly_convex()) {
      ++count;
      dim = std::max(dim, flat_dimension(*f));
    }
    r.value("positive_measure", fd->positive_measure ? 1 : 0);
    r.value("nsc_faces", count);
    r.value("nsc_max_flat_dimension", dim);
    r.value("gamma_nsc_dimension", gamma_nsc_dimension(*fd));
    const int bound = static_cast<int>(std::ceil((n + q) / 2.0)) - 1;
    r.check("dimension_bound", dim <= bound, std::to_string(dim) + " <= " + std::to_string(bound));
  }

  if (fit == "s") {
    if (K.empty()) throw AnalysisError("empty coincidence set");
    GrowthOptions go;
    go.theory = std::isnan(theory) ? 1.0 : theory;
    go.domain = &domain;
    go.core_margin = 0.25 * (domain.bbox_hi() - domain.bbox_lo()).minCoeff() / 2;
    const FitReport f = growth_exponent(v, K, go);
    r.fit("growth", f);
    r.check("growth_exponent", f.pass);
  } else if (fit == "volume") {
    std::optional<Halfspace> keep;
    if (fd && fd->positive_measure) {
      Vec e = Vec::Zero(n);
      e[0] = 1;
      keep = beyond_support(K, e);
    }
    const FitReport f =
        section_scaling(v, default_levels(v, 8, 0.5, keep), std::isnan(theory) ? (n - q) / 2 : theory, 0.15, keep);
    r.fit("section", f);
    r.check("section_scaling", f.pass);
  } else if (fit == "collar") {
    if (!fd) throw AnalysisError("empty coincidence set");
    const auto face = fd->nsc_nodes();
    if (face.empty()) throw AnalysisError("no Gamma_nsc face");
    const double h = v.grid.max_h();
    std::vector<double> deltas;
    for (double d : {0.8, 0.4, 0.2, 0.1, 0.05})
      if (d >= 3 * h) deltas.push_back(d);
    if (deltas.size() < 3) throw AnalysisError("below resolution");
    const auto col = collar_integral(v, face, deltas);
    r.trace("delta", deltas);
    r.trace("collar", col);
    r.check("collar_plateau", col.back() >= 0.5 * col[1] && col.back() > 0);
  } else if (!fit.empty()) {
    throw UsageError("--fit must be s, volume or collar");
  }
  if (!out_dir.empty()) write_report(r, out_dir);
  std::cout << to_text(r);
  return r.checks.empty() ? 0 : exit_for(r.pass());
}

// ------------------------------------------------------------- experiment

int cmd_experiment(const std::string& name, const std::string& path) {
  Config c = Config::load(path);
  if (c.has("experiment.name") && c.str("experiment.name") != name)
    throw ConfigError("config names experiment " + c.str("experiment.name") + ", not " + name);
  c.set("experiment.name", name);
  const ExperimentConfig e = experiment_config(c);
  ExperimentReport r = run_experiment(e);
  if (!e.output.empty()) write_report(r, e.output);
  std::cout << to_text(r);
  return exit_for(r.pass());
}

int cmd_validate(const std::string& out_dir) {
  ExperimentReport r = run_solver_validation({33, 65, 129}, {17, 33, 65});
  if (!out_dir.empty()) write_report(r, out_dir);
  std::cout << to_text(r);
  return exit_for(r.pass());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for det D^2 v = g v^q chi_{v>0}"};
  app.require_subcommand(1);

  std::string solve_cfg;
  auto* solve = app.add_subcommand("solve", "Solve a Dirichlet problem described by a config file");
  solve->add_option("config", solve_cfg)->required()->check(CLI::ExistingFile);

  std::string family, out_path, gamma = "balanced";
  int n = 2, k = 1, nodes = 65;
  double q = 0, s = 1;
  bool emit = false;
  std::uint64_t seed = 7;
  auto* example = app.add_subcommand("example", "Inspect an analytic family or sample it on a grid");
  example->add_option("family", family, "quadratic, radial, family-a, family-b, cylinder")->required();
  example->add_option("--n", n)->check(CLI::Range(2, 3));
  example->add_option("--k", k);
  example->add_option("--q", q);
  example->add_option("--s", s);
  example->add_option("--gamma", gamma, "balanced or printed");
  example->add_option("--res", nodes, "nodes per axis")->check(CLI::Range(5, 1025));
  example->add_option("--seed", seed);
  example->add_flag("--emit-grid", emit, "write the sampled field");
  example->add_option("--out", out_path, "field file (default stdout)");

  std::string field, fit, domain, report_dir;
  double theory = std::nan(""), eps_K = 0;
  auto* analyze = app.add_subcommand("analyze", "Coincidence set, faces and scaling fits of a field file");
  analyze->add_option("field", field)->required()->check(CLI::ExistingFile);
  analyze->add_option("--fit", fit, "s, volume or collar");
  analyze->add_option("--domain", domain, "ball:R, box:A or cross:R (default inferred from the mask)");
  analyze->add_option("--theory", theory, "theoretical exponent for the fit");
  analyze->add_option("--eps-K", eps_K, "coincidence threshold");
  analyze->add_option("--report", report_dir, "output directory");

  std::string exp_name, exp_cfg;
  auto* experiment = app.add_subcommand("experiment", "Run one experiment from a config file");
  experiment->add_option("name", exp_name)->required()->check(CLI::IsMember(experiment_names()));
  experiment->add_option("config", exp_cfg)->required()->check(CLI::ExistingFile);

  std::string validate_dir;
  auto* validate = app.add_subcommand("validate", "Solver regression suite");
  validate->add_option("--report", validate_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return cmd_solve(solve_cfg);
    if (*example) return cmd_example(family, n, k, q, s, gamma, nodes, emit, out_path, seed);
    if (*analyze) return cmd_analyze(field, fit, domain, theory, eps_K, report_dir);
    if (*experiment) return cmd_experiment(exp_name, exp_cfg);
    if (*validate) return cmd_validate(validate_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const AnalyticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FieldFormatError& e) {
    std::cerr << "field error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
