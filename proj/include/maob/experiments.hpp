#pragma once

#include "maob/config.hpp"
#include "maob/report.hpp"
#include "maob/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace maob {

struct ExperimentConfig {
  std::string name;  // dim-optimality | cylinder | polytope | stability | smp-failure | solver-validation
  int n = 2;
  double q = 0.0;
  int k = 1;
  double s = 1.0;
  int res = 0;  // nodes per axis; 0 selects 129 (n = 2) or 65 (n = 3)
  std::vector<int> res_2d{33, 65, 129};
  std::vector<int> res_3d{17, 33, 65};
  std::vector<double> t_list;      // fractions of the boundary-data scale
  std::vector<double> delta_list;  // collar widths
  std::string base;                // stability / smp-failure base problem
  double half_width = 0.25;        // polytope P = [-a, a]^n
  double m1_init = 1.0;
  double zoom = 16.0;              // dim-optimality solves on B_{tau/zoom}
  double slab = 0.0;               // cylinder half-height; <= 0 picks a default
  std::uint64_t seed = 7;
  std::string output;
};

/// Reads [experiment] keys; rejects unknown keys with ConfigError.
ExperimentConfig experiment_config(const Config& c);
const std::vector<std::string>& experiment_names();

/// A solved problem with its discretization and coincidence set.
struct Solved {
  ProblemSpec spec;
  Discretization disc;
  SolveResult result;
  double eps_K = 0.0;
  CellSet K;
};

Solved solve_on_grid(const ProblemSpec& p, int nodes_per_axis, const SolverOptions& opts = {});
Solved solve_on_grid(const ProblemSpec& p, const std::vector<int>& nodes_per_axis, const SolverOptions& opts = {});

/// Base problems for the stability and maximum-principle runs.
struct BaseProblem {
  std::string label;
  ProblemSpec spec;
  std::vector<int> nodes;
};
BaseProblem polytope_base(int n, double q, int nodes, double half_width = 0.25, double m1_init = 1.0,
                          std::uint64_t seed = 7);
BaseProblem radial_base(int n, double q, int nodes);
/// B_1 with constant data; for n = 2, q = 0 and data 0.1 the coincidence set is
/// close to B_{3/4}.
BaseProblem disc_base(int n, double q, int nodes, double data = 0.1);
BaseProblem family_a_base(int n, int k, double q, int nodes);
BaseProblem make_base(const std::string& kind, const ExperimentConfig& c);

/// Solves on B_{tau/zoom} (any smaller ball keeps the subsolution valid) and
/// rescales to B_1, so the fits see the leading term of the growth.
ExperimentReport run_dim_optimality(int n, double q, int k, double s, int nodes, std::uint64_t seed = 7,
                                    double zoom = 16.0);
/// Box [-1,1]^{n-1} x [-slab, slab] with uniform spacing 2/(nodes-1); nodes <= 0
/// selects 513 (n = 2) or 241 (n = 3), slab <= 0 selects min(tau, 1/8 or 1/32).
ExperimentReport run_cylinder(int n, double q, int nodes, std::vector<double> deltas = {}, double slab = 0.0);
/// P = [-a, a]^n inside the cross-polytope sum |x_i| <= n a.
ExperimentReport run_polytope(int n, double q, int nodes, double half_width = 0.25, double m1_init = 1.0,
                              std::uint64_t seed = 7);
ExperimentReport run_stability(const BaseProblem& base, std::vector<double> t_list = {});
ExperimentReport run_smp_failure(const BaseProblem& base, std::vector<double> t_list = {});
ExperimentReport run_solver_validation(const std::vector<int>& res_2d, const std::vector<int>& res_3d,
                                       std::uint64_t seed = 7);

ExperimentReport run_experiment(const ExperimentConfig& c);

}  // namespace maob
