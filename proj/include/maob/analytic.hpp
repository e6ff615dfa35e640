#pragma once

#include "maob/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace maob {

class AnalyticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partial derivatives of a bivariate profile u(rho, r). The quotients
/// u_rho/rho and u_r/r are carried separately so the axes need no division;
/// an infinite u_rho/rho at rho = 0 marks a singular axis.
struct ProfileDerivs {
  double u = 0, u_rho = 0, u_r = 0, u_rhorho = 0, u_rr = 0, u_rhor = 0;
  double u_rho_over_rho = 0, u_r_over_r = 0;
};

/// w(x) = u(|y|, |z|) with x = (y, z), y in R^{n-k}, z in R^k.
struct SymmetricProfile {
  int n = 0;
  int k = 0;
  std::function<ProfileDerivs(double rho, double r)> eval;
};

/// Determinant of D^2 w through the two-variable reduction
///   (u_rho/rho)^{n-k-1} (u_r/r)^{k-1} (u_rho,rho u_rr - u_rho,r^2).
/// Throws AnalyticError("on symmetry axis") when rho or r vanishes.
double symmetric_det(const SymmetricProfile& profile, double rho, double r);

/// Split x into (rho, r) = (|y|, |z|) for the given k.
std::pair<double, double> split_radii(const Vec& x, int k);

/// Full Cartesian value/gradient/Hessian of w(x) = u(|y|,|z|).
struct Evaluation {
  double value = 0;
  Vec gradient;
  Mat hessian;
  bool smooth = true;  // false on the singular set; the Hessian is then NaN
};
Evaluation lift_profile(const SymmetricProfile& profile, const Vec& x);

/// Exponent choice for the s > 1 family.
enum class GammaRule {
  balanced,  // gamma = (2(n-k) + (k-n+q)s)/k : balances the powers of rho in det D^2 w
  printed,   // gamma = (n-k+q + (k-n+q)s)/k : as typeset in the source construction
};

struct FamilyA {
  int n = 3, k = 1;
  double q = 0;
};
struct FamilyB {
  int n = 3, k = 1;
  double q = 0, s = 1.25;
  GammaRule rule = GammaRule::balanced;
};
struct Cylinder {
  int n = 2;
  double q = 1;
};
struct RadialPower {
  int n = 2;
  double q = 0;
};

/// One shifted, rotated copy of the s = 1 family attached to a face of a polytope.
struct PolytopePiece {
  Vec origin;      // point on the affine hull of the face
  Mat frame;       // rows: orthonormal local axes; the last k rows span the face directions
  double zoom = 1; // local coordinates are zoom * frame * (x - origin)
  Halfspace ell;   // exposing linear function: face = P cap {ell = 0}, P in {ell <= 0}
  int face_dim = 0;
};

struct PolytopeSub {
  int n = 2;
  double q = 0;
  int k = 1;
  double m1 = 1, m2 = 1;
  double tau_base = 0.5;  // validity radius of the base family in local coordinates
  std::vector<PolytopePiece> pieces;
  std::vector<Halfspace> polytope;  // P as halfspaces
};

enum class FamilyKind { family_a, family_b, cylinder, radial_power, polytope_sub };
const char* to_string(FamilyKind k);

struct ExponentInfo {
  double exponent = 0;     // beta (s = 1), gamma (s > 1), s (cylinder) or alpha (radial)
  double s_effective = 1;  // growth order at the zero set
  bool admissible = false;
  std::string reason;      // empty when admissible
};

ExponentInfo family_exponents(FamilyKind kind, int n, int k, double q, double s = 1.0,
                              GammaRule rule = GammaRule::balanced);

/// Closed-form examples with exact value, gradient and Hessian.
class AnalyticExample {
 public:
  using Params = std::variant<FamilyA, FamilyB, Cylinder, RadialPower, PolytopeSub>;

  explicit AnalyticExample(Params p);

  static AnalyticExample family_a(int n, int k, double q);
  static AnalyticExample family_b(int n, int k, double q, double s, GammaRule rule = GammaRule::balanced);
  static AnalyticExample cylinder(int n, double q);
  static AnalyticExample radial_power(int n, double q);

  const Params& params() const { return params_; }
  FamilyKind kind() const;
  int dim() const;
  double q() const;
  std::string name() const;

  /// Dimension of the flat zero set (k for the symmetric families).
  int zero_set_dim() const;
  /// Exponent info for this example (throws nothing; check admissible).
  ExponentInfo exponents() const;

  /// Validity radius in r; infinite for RadialPower.
  double tau() const { return tau_; }
  void set_tau(double t) { tau_ = t; }
  double c_sub() const { return c_sub_; }
  void set_c_sub(double c) { c_sub_ = c; }
  /// Accumulated rescaling factor: the example is x -> sigma^{-2n/(n-q)} base(sigma x).
  double sigma() const { return sigma_; }
  void set_sigma(double s) { sigma_ = s; }

  /// Two-variable profile of the unscaled base (symmetric families and
  /// RadialPower, which uses k = 1).
  std::optional<SymmetricProfile> profile() const;

  bool in_validity(const Vec& x) const;
  /// Throws AnalyticError("outside {r <= tau}") outside the validity region.
  Evaluation eval(const Vec& x) const;
  double value(const Vec& x) const { return eval(x).value; }
  /// The closed form without the validity guard. It stays defined a little past
  /// the rim, which lets difference stencils straddle it.
  Evaluation eval_formula(const Vec& x) const;

  /// det D^2 w at an off-axis point: the two-variable reduction for symmetric
  /// families, the dense Hessian determinant for polytope subsolutions.
  double det_hessian(const Vec& x) const;
  /// The simplified closed form of det D^2 w printed with each construction
  /// (uses the example's own exponent choice). Unavailable for PolytopeSub.
  double displayed_det(const Vec& x) const;

 private:
  Evaluation eval_unscaled(const Vec& y) const;
  bool in_validity_unscaled(const Vec& y) const;

  Params params_;
  double tau_ = 0.5;
  double c_sub_ = 1.0;
  double sigma_ = 1.0;
};

struct ResidualResult {
  double min_residual = 0;
  Vec argmin;
};

/// min over the sample of det D^2 w - c_sub * w^q. Throws on an empty sample.
ResidualResult subsolution_residual(const AnalyticExample& e, const std::vector<Vec>& sample);

/// Largest c with det D^2 w >= c w^q on the sample (points with w = 0
/// excluded). Stores the constant in `e` and returns it.
double calibrate_c(AnalyticExample& e, const std::vector<Vec>& sample);

/// x -> tau^{-2n/(n-q)} v(tau x).
AnalyticExample rescale_solution(const AnalyticExample& e, double tau);
ScalarField rescale_solution(const ScalarField& v, double tau, double q);

/// Quasi-random (Halton) points in the box [lo, hi], filtered by `keep`.
std::vector<Vec> halton_points(const Vec& lo, const Vec& hi, std::size_t count,
                               const std::function<bool(const Vec&)>& keep, std::uint64_t seed = 0);

/// Off-axis sample of the example's natural domain (B_tau for FamilyA/B and
/// RadialPower, the slab box for Cylinder), avoiding the singular set.
std::vector<Vec> validity_sample(const AnalyticExample& e, std::size_t count, std::uint64_t seed = 0);

/// Largest tau in {2^-j} for which the Hessian is PSD and the calibrated
/// constant is positive on a 20^n lattice sample. Stores tau and c_sub.
double choose_tau(AnalyticExample& e);

/// Dense central finite-difference Hessian determinant (test oracle support).
double fd_hessian_det(const std::function<double(const Vec&)>& f, const Vec& x, double step);
/// Difference step for fd_hessian_det: a small fraction of the distance from x
/// to the singular set of the example (its axes, or the origin).
double fd_step(const AnalyticExample& e, const Vec& x);

}  // namespace maob
