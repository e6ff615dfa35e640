#pragma once

#include "maob/analytic.hpp"
#include "maob/stencil.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace maob {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ScalarFn = std::function<double(const Vec&)>;

/// det D^2 v = g v^q chi_{v>0}, v >= 0 convex, v = dirichlet on the boundary.
struct ProblemSpec {
  int n = 2;
  double q = 0.0;
  ScalarFn g;                 // empty means g = 1
  double g_min = 1.0, g_max = 1.0;
  ConvexDomain domain = ConvexDomain::ball(Vec::Zero(2), 1.0);
  ScalarFn dirichlet;
  double tol_outer = 0.0;     // <= 0: 1e-7 * data scale
  double tol_inner = 0.0;     // <= 0: tol_outer / 10
  int max_outer = 500;
  int max_inner = 50000;

  /// Throws SpecError on q outside [0, n), bad g bounds, dimension mismatch
  /// or missing boundary data.
  void validate() const;
  double g_at(const Vec& x) const { return g ? g(x) : 1.0; }
};

enum class InnerMethod {
  jacobi,  // damped pointwise local solves, Jacobi ordering
  policy,  // policy iteration on the n-th root form, sparse linear solves
};

enum class OuterMethod {
  coupled,  // g v^q treated implicitly (linearised each iteration)
  picard,   // right-hand side frozen per outer iteration, relaxed update
};

enum class InitialGuess { zero, envelope, given };

struct SolverOptions {
  OuterMethod outer = OuterMethod::coupled;
  InnerMethod inner = InnerMethod::policy;
  InitialGuess init = InitialGuess::envelope;
  std::optional<ScalarField> initial;  // used with InitialGuess::given
  double damping = 0.9;                // Jacobi inner damping
  double relaxation = 0.0;             // outer Picard relaxation; <= 0 selects n/(n+q)
  double eps_pos = 0.0;                // q = 0 positivity threshold; <= 0 selects h^2
};

struct SolveReport {
  int outer_iters = 0;
  long inner_iters = 0;
  std::vector<double> residual_history;  // residual_norm after each outer iteration
  std::vector<double> update_history;    // sup-norm Picard update per outer iteration
  double final_residual = 0.0;
  double min_value = 0.0;
  CellSet K_cells;                       // nodes with v <= eps_pos
  std::vector<std::string> flags;        // "non-converged", "residual-increase", ...
  bool converged = false;
  double wall_time = 0.0;
};

struct SolveResult {
  ScalarField v;
  SolveReport report;
};

/// Frozen right-hand side g v^q (q > 0) or g [v > eps_pos] (q = 0) at every node.
std::vector<double> rhs_values(const Discretization& d, const ProblemSpec& p, const std::vector<double>& v,
                               double eps_pos);

/// Grid + stencil + boundary-data tables for a problem.
Discretization discretize(const ProblemSpec& p, std::span<const int> res_cells, int width = 0);
Discretization discretize(const ProblemSpec& p, int res_cells, int width = 0);

SolveResult solve_dirichlet(const ProblemSpec& p, const Discretization& d, const SolverOptions& opts = {});

/// sup over unknown nodes of |MA_h[v] - g v^q|. For q = 0 the indicator is
/// the monotone graph: g at nodes with v > eps_pos, the interval [0, g] below.
double residual_norm(const ScalarField& v, const ProblemSpec& p, const Discretization& d, double eps_pos = 0.0);

/// Convex envelope of the boundary data on the grid (the q-independent
/// largest convex function below the data).
ScalarField convex_envelope(const Discretization& d, int max_sweeps = 200000, double tol = 1e-13);

struct ComparisonReport {
  bool holds = false;
  double slack = 0.0;
  double max_violation = 0.0;  // max over interior of (sub - sup), may be negative
  double residual_sub = 0.0;
  double residual_sup = 0.0;
};

/// Discrete comparison: sup >= sub - slack at every unknown node, with
/// slack = 5 * max residual * diam^2. The residuals are one-sided: how far sub
/// fails to be a discrete subsolution and sup a discrete supersolution. Throws SpecError("hypotheses not met")
/// if the fields are on different grids or sub > sup at a boundary node.
ComparisonReport check_comparison(const ScalarField& sub, const ScalarField& sup, const ProblemSpec& p_sub,
                                  const ProblemSpec& p_sup, const Discretization& d_sub,
                                  const Discretization& d_sup);
ComparisonReport check_comparison(const ScalarField& sub, const ScalarField& sup, const ProblemSpec& p,
                                  const Discretization& d);

/// Samples a function on the masked grid (NaN outside).
ScalarField sample_field(const GridMask& gm, const ScalarFn& f);

/// Sup-norm difference over mask nodes.
double sup_difference(const ScalarField& a, const ScalarField& b);

}  // namespace maob
