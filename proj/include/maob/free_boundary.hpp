#pragma once

#include "maob/convex_faces.hpp"
#include "maob/geometry.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maob {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Log-log fit against a theoretical exponent. With `lower_bound` the check
/// is estimate >= theory - tolerance, otherwise |estimate - theory| <= tolerance.
struct FitReport {
  double estimate = 0.0;
  double intercept = 0.0;
  double theory = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;
  double r_squared = 0.0;
  double window_lo = 0.0, window_hi = 0.0;  // range of the abscissa actually used
  std::vector<double> log_x, log_y;
  bool pass = false;

  void judge();
};

/// Least-squares line through (log x, log y). Throws AnalysisError with
/// "insufficient dynamic range" for fewer than 4 points.
FitReport fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double theory, double tolerance,
                     bool lower_bound);

/// max(10 * residual^{2/(n-q)}, 0.01 * h^{2n/(n-q)}).
double default_eps_K(const Grid& grid, double q, double final_residual);

/// Mask nodes with v < eps_K (each node standing for its dual cell).
CellSet coincidence_set(const ScalarField& v, double eps_K);

/// Exposed faces of K with the Gamma_sc / Gamma_nsc split and the
/// |K| > 0 dichotomy flag. Throws GeometryError("no coincidence set") on empty K.
FaceDecomposition classify_gamma(const CellSet& K, const ConvexDomain& domain, FaceOptions opts = {});

/// Flat dimension of a face (its affine rank at tolerance tol_face).
int flat_dimension(const Face& face);
int flat_dimension(const Grid& grid, const std::vector<std::size_t>& nodes, const Vec& normal, double tol);

/// Manifold dimension of the union of all Gamma_nsc faces (0 when there are none).
int gamma_nsc_dimension(const FaceDecomposition& fd);

struct GrowthOptions {
  std::vector<double> shells;        // increasing radii; empty selects 10 geometric shells in [3h, diam/4]
  double theory = 1.0;
  double tolerance = 0.1;
  const ConvexDomain* domain = nullptr;  // when set, nodes closer than core_margin to the boundary are skipped
  double core_margin = 0.0;
};

/// Slope of log(shell median of v) against log(shell median of dist(x, K)).
FitReport growth_exponent(const ScalarField& v, const CellSet& K, const GrowthOptions& opts);

/// Slope of log |{v < h} cap keep| against log h. Passes when the slope is at
/// least theory - tolerance.
FitReport section_scaling(const ScalarField& v, const std::vector<double>& levels, double theory,
                          double tolerance = 0.15, const std::optional<Halfspace>& keep = std::nullopt);

/// `count` geometric levels spanning one decade below `top_fraction` * max v
/// (max over keep).
std::vector<double> default_levels(const ScalarField& v, int count = 8, double top_fraction = 0.5,
                                   const std::optional<Halfspace>& keep = std::nullopt);

/// Halfspace strictly beyond the supporting hyperplane of K with outer normal nu.
Halfspace beyond_support(const CellSet& K, const Vec& nu);

/// For each delta: sum over nodes within delta of `face` of |Laplacian_h v| times
/// the cell volume. Nodes whose axis neighbours leave the mask are skipped.
/// Throws AnalysisError("below resolution") when some delta < 3h.
std::vector<double> collar_integral(const ScalarField& v, const std::vector<std::size_t>& face,
                                    const std::vector<double>& deltas);

}  // namespace maob
