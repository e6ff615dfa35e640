#include "maob/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace maob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double f_of(double r) { return 1.0 + 0.5 * r * r; }

double radial_alpha(int n, double q) { return 2.0 * n / (n - q); }

double radial_coeff(int n, double q) {
  const double a = radial_alpha(n, q);
  return std::pow(std::pow(a, n) * (a - 1.0), -1.0 / (n - q));
}

double gamma_of(int n, int k, double q, double s, GammaRule rule) {
  if (rule == GammaRule::balanced) return (2.0 * (n - k) + (k - n + q) * s) / k;
  return (n - k + q + (k - n + q) * s) / k;
}

ProfileDerivs family_a_profile(double beta, double rho, double r) {
  ProfileDerivs d;
  const double f = f_of(r);
  const double pb = std::pow(rho, beta);
  d.u = rho + pb * f;
  d.u_r = pb * r;
  d.u_r_over_r = pb;
  d.u_rr = pb;
  if (rho > 0) {
    const double pb1 = std::pow(rho, beta - 1.0);
    d.u_rho = 1.0 + beta * pb1 * f;
    d.u_rho_over_rho = d.u_rho / rho;
    d.u_rhorho = beta * (beta - 1.0) * std::pow(rho, beta - 2.0) * f;
    d.u_rhor = beta * pb1 * r;
  } else {
    d.u_rho = 1.0;
    d.u_rho_over_rho = kInf;
    d.u_rhorho = beta < 2 ? kInf : (beta == 2 ? 2.0 * f : 0.0);
    d.u_rhor = 0.0;
  }
  return d;
}

ProfileDerivs family_b_profile(double s, double gamma, double rho, double r) {
  ProfileDerivs d;
  const double f = f_of(r);
  const double pg = std::pow(rho, gamma);
  d.u = std::pow(rho, s) + pg * f;
  d.u_r = pg * r;
  d.u_r_over_r = pg;
  d.u_rr = pg;
  if (rho > 0) {
    d.u_rho = s * std::pow(rho, s - 1.0) + gamma * std::pow(rho, gamma - 1.0) * f;
    d.u_rho_over_rho = d.u_rho / rho;
    d.u_rhorho = s * (s - 1.0) * std::pow(rho, s - 2.0) + gamma * (gamma - 1.0) * std::pow(rho, gamma - 2.0) * f;
    d.u_rhor = gamma * std::pow(rho, gamma - 1.0) * r;
  } else {
    d.u_rho = 0.0;
    d.u_rho_over_rho = kInf;
    d.u_rhorho = kInf;
    d.u_rhor = 0.0;
  }
  return d;
}

ProfileDerivs cylinder_profile(double s, double rho, double r) {
  ProfileDerivs d;
  const double dist = std::max(rho - 0.5, 0.0);
  if (dist <= 0) return d;  // identically zero on the solid cylinder
  const double f = f_of(r);
  const double ds = std::pow(dist, s);
  d.u = dist + ds * f;
  d.u_rho = 1.0 + s * std::pow(dist, s - 1.0) * f;
  d.u_rho_over_rho = d.u_rho / rho;
  d.u_rhorho = s * (s - 1.0) * std::pow(dist, s - 2.0) * f;
  d.u_r = ds * r;
  d.u_r_over_r = ds;
  d.u_rr = ds;
  d.u_rhor = s * std::pow(dist, s - 1.0) * r;
  return d;
}

ProfileDerivs radial_profile(double c, double alpha, double rho, double r) {
  ProfileDerivs d;
  const double R2 = rho * rho + r * r;
  const double R = std::sqrt(R2);
  d.u = c * std::pow(R, alpha);
  if (R == 0) {
    const double second = alpha == 2 ? 2.0 * c : 0.0;
    d.u_rho_over_rho = d.u_r_over_r = d.u_rhorho = d.u_rr = second;
    return d;
  }
  const double base = c * alpha * std::pow(R, alpha - 2.0);
  const double curv = c * alpha * (alpha - 2.0) * std::pow(R, alpha - 4.0);
  d.u_rho = base * rho;
  d.u_r = base * r;
  d.u_rho_over_rho = base;
  d.u_r_over_r = base;
  d.u_rhorho = base + curv * rho * rho;
  d.u_rr = base + curv * r * r;
  d.u_rhor = curv * rho * r;
  return d;
}

}  // namespace

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::family_a: return "family-a";
    case FamilyKind::family_b: return "family-b";
    case FamilyKind::cylinder: return "cylinder";
    case FamilyKind::radial_power: return "radial-power";
    case FamilyKind::polytope_sub: return "polytope-sub";
  }
  return "?";
}

double symmetric_det(const SymmetricProfile& p, double rho, double r) {
  if (!(rho > 0) || !(r > 0)) throw AnalyticError("on symmetry axis");
  const ProfileDerivs d = p.eval(rho, r);
  return std::pow(d.u_rho / rho, p.n - p.k - 1) * std::pow(d.u_r / r, p.k - 1) *
         (d.u_rhorho * d.u_rr - d.u_rhor * d.u_rhor);
}

std::pair<double, double> split_radii(const Vec& x, int k) {
  const int n = static_cast<int>(x.size());
  return {x.head(n - k).norm(), x.tail(k).norm()};
}

Evaluation lift_profile(const SymmetricProfile& p, const Vec& x) {
  const int n = p.n, k = p.k, m = n - k;
  const Vec y = x.head(m), z = x.tail(k);
  const double rho = y.norm(), r = z.norm();
  const ProfileDerivs d = p.eval(rho, r);
  Evaluation e;
  e.value = d.u;
  e.gradient = Vec::Zero(n);
  e.hessian = Mat::Zero(n, n);

  Vec yh = Vec::Zero(m), zh = Vec::Zero(k);
  if (rho > 0) yh = y / rho;
  else yh[m - 1] = 1.0;
  if (r > 0) zh = z / r;
  else zh[k - 1] = 1.0;

  // Minimal-norm subgradient on the axis: the y-part of a cone vanishes.
  if (rho > 0) e.gradient.head(m) = d.u_rho * yh;
  if (r > 0) e.gradient.tail(k) = d.u_r * zh;

  if (rho == 0 && !std::isfinite(d.u_rho_over_rho)) {
    e.smooth = false;
    e.hessian.setConstant(kNaN);
    return e;
  }
  const Mat Iy = Mat::Identity(m, m), Iz = Mat::Identity(k, k);
  e.hessian.topLeftCorner(m, m) = d.u_rhorho * yh * yh.transpose() + d.u_rho_over_rho * (Iy - yh * yh.transpose());
  e.hessian.bottomRightCorner(k, k) = d.u_rr * zh * zh.transpose() + d.u_r_over_r * (Iz - zh * zh.transpose());
  e.hessian.topRightCorner(m, k) = d.u_rhor * yh * zh.transpose();
  e.hessian.bottomLeftCorner(k, m) = e.hessian.topRightCorner(m, k).transpose();
  return e;
}

ExponentInfo family_exponents(FamilyKind kind, int n, int k, double q, double s, GammaRule rule) {
  ExponentInfo out;
  auto fail = [&](std::string why) {
    out.admissible = false;
    if (out.reason.empty()) out.reason = std::move(why);
  };
  out.admissible = true;
  if (!(q >= 0 && q < n)) fail("q outside [0, n)");
  switch (kind) {
    case FamilyKind::family_a:
    case FamilyKind::polytope_sub: {
      if (kind == FamilyKind::polytope_sub) k = static_cast<int>(std::ceil((n + q) / 2.0)) - 1;
      if (k < 0 || k > n - 1) fail("k outside [0, n-1]");
      out.exponent = (n - k + 1 + q) / (k + 1.0);
      out.s_effective = 1.0;
      if (!(n + q > 2)) fail("requires n + q > 2");
      if (kind == FamilyKind::family_a && !(k >= 1 && 2.0 * k < n + q)) fail("requires k < (n+q)/2");
      break;
    }
    case FamilyKind::family_b: {
      if (k < 1 || k > n - 1) fail("k outside [1, n-1]");
      out.exponent = k >= 1 ? gamma_of(n, k, q, s, rule) : kNaN;
      out.s_effective = s;
      if (!(n + q > 2)) fail("requires n + q > 2");
      if (!(s > 1)) fail("requires s > 1");
      if (!(s <= (2.0 * n - 2.0 * k) / (n - q) + 1e-12)) fail("requires s <= (2n-2k)/(n-q)");
      if (!(out.exponent >= s - 1e-12)) fail("gamma < s");
      break;
    }
    case FamilyKind::cylinder:
      out.exponent = (q + 2.0) / 2.0;
      out.s_effective = 1.0;
      if (n < 2) fail("requires n >= 2");
      if (!(q > 0)) fail("requires q > 0");
      break;
    case FamilyKind::radial_power:
      out.exponent = q < n ? radial_alpha(n, q) : kNaN;
      out.s_effective = out.exponent;
      if (n < 1) fail("requires n >= 1");
      break;
  }
  return out;
}

AnalyticExample::AnalyticExample(Params p) : params_(std::move(p)) {
  if (kind() == FamilyKind::radial_power) tau_ = kInf;
}

AnalyticExample AnalyticExample::family_a(int n, int k, double q) {
  auto info = family_exponents(FamilyKind::family_a, n, k, q);
  if (!info.admissible) throw AnalyticError("inadmissible family-a parameters: " + info.reason);
  return AnalyticExample(FamilyA{n, k, q});
}

AnalyticExample AnalyticExample::family_b(int n, int k, double q, double s, GammaRule rule) {
  auto info = family_exponents(FamilyKind::family_b, n, k, q, s, GammaRule::balanced);
  if (!info.admissible) throw AnalyticError("inadmissible family-b parameters: " + info.reason);
  return AnalyticExample(FamilyB{n, k, q, s, rule});
}

AnalyticExample AnalyticExample::cylinder(int n, double q) {
  auto info = family_exponents(FamilyKind::cylinder, n, 1, q);
  if (!info.admissible) throw AnalyticError(q > 0 ? "inadmissible cylinder parameters: " + info.reason
                                                  : std::string("requires q > 0"));
  return AnalyticExample(Cylinder{n, q});
}

AnalyticExample AnalyticExample::radial_power(int n, double q) {
  auto info = family_exponents(FamilyKind::radial_power, n, 1, q);
  if (!info.admissible) throw AnalyticError("inadmissible radial-power parameters: " + info.reason);
  return AnalyticExample(RadialPower{n, q});
}

FamilyKind AnalyticExample::kind() const { return static_cast<FamilyKind>(params_.index()); }

int AnalyticExample::dim() const {
  return std::visit([](const auto& p) { return p.n; }, params_);
}

double AnalyticExample::q() const {
  return std::visit([](const auto& p) { return p.q; }, params_);
}

std::string AnalyticExample::name() const {
  std::ostringstream os;
  os << to_string(kind()) << "(n=" << dim();
  if (const auto* a = std::get_if<FamilyA>(&params_)) os << ",k=" << a->k;
  if (const auto* b = std::get_if<FamilyB>(&params_))
    os << ",k=" << b->k << ",s=" << b->s << (b->rule == GammaRule::printed ? ",gamma=printed" : "");
  if (const auto* p = std::get_if<PolytopeSub>(&params_)) os << ",k=" << p->k;
  os << ",q=" << q() << ")";
  return os.str();
}

int AnalyticExample::zero_set_dim() const {
  switch (kind()) {
    case FamilyKind::family_a: return std::get<FamilyA>(params_).k;
    case FamilyKind::family_b: return std::get<FamilyB>(params_).k;
    case FamilyKind::radial_power: return 0;
    default: return dim();
  }
}

ExponentInfo AnalyticExample::exponents() const {
  switch (kind()) {
    case FamilyKind::family_a: {
      const auto& a = std::get<FamilyA>(params_);
      return family_exponents(kind(), a.n, a.k, a.q);
    }
    case FamilyKind::family_b: {
      const auto& b = std::get<FamilyB>(params_);
      return family_exponents(kind(), b.n, b.k, b.q, b.s, b.rule);
    }
    default: return family_exponents(kind(), dim(), 1, q());
  }
}

std::optional<SymmetricProfile> AnalyticExample::profile() const {
  switch (kind()) {
    case FamilyKind::family_a: {
      const auto& a = std::get<FamilyA>(params_);
      const double beta = family_exponents(kind(), a.n, a.k, a.q).exponent;
      return SymmetricProfile{a.n, a.k, [beta](double rho, double r) { return family_a_profile(beta, rho, r); }};
    }
    case FamilyKind::family_b: {
      const auto& b = std::get<FamilyB>(params_);
      const double s = b.s, g = gamma_of(b.n, b.k, b.q, b.s, b.rule);
      return SymmetricProfile{b.n, b.k, [s, g](double rho, double r) { return family_b_profile(s, g, rho, r); }};
    }
    case FamilyKind::cylinder: {
      const auto& c = std::get<Cylinder>(params_);
      const double s = (c.q + 2.0) / 2.0;
      return SymmetricProfile{c.n, 1, [s](double rho, double r) { return cylinder_profile(s, rho, r); }};
    }
    case FamilyKind::radial_power: {
      const auto& rp = std::get<RadialPower>(params_);
      if (rp.n < 2) return std::nullopt;
      const double a = radial_alpha(rp.n, rp.q), c = radial_coeff(rp.n, rp.q);
      return SymmetricProfile{rp.n, 1, [a, c](double rho, double r) { return radial_profile(c, a, rho, r); }};
    }
    case FamilyKind::polytope_sub: return std::nullopt;
  }
  return std::nullopt;
}

bool AnalyticExample::in_validity_unscaled(const Vec& y) const {
  switch (kind()) {
    case FamilyKind::family_a: return split_radii(y, std::get<FamilyA>(params_).k).second <= tau_ * (1 + 1e-12);
    case FamilyKind::family_b: return split_radii(y, std::get<FamilyB>(params_).k).second <= tau_ * (1 + 1e-12);
    case FamilyKind::cylinder: return std::abs(y[y.size() - 1]) <= tau_ * (1 + 1e-12);
    default: return true;
  }
}

bool AnalyticExample::in_validity(const Vec& x) const {
  if (x.size() != dim()) throw AnalyticError("dimension mismatch");
  return in_validity_unscaled(sigma_ * x);
}

Evaluation AnalyticExample::eval_unscaled(const Vec& y) const {
  if (const auto* p = std::get_if<PolytopeSub>(&params_)) {
    const int n = p->n;
    const double beta = family_exponents(FamilyKind::family_a, n, p->k, p->q).exponent;
    const SymmetricProfile base{n, p->k, [beta](double rho, double r) { return family_a_profile(beta, rho, r); }};
    Evaluation best;
    best.value = 0.0;
    best.gradient = Vec::Zero(n);
    best.hessian = Mat::Zero(n, n);
    double top = 0.0;
    int active = -1, ties = 0;
    for (std::size_t i = 0; i < p->pieces.size(); ++i) {
      const auto& pc = p->pieces[i];
      const Vec local = pc.zoom * pc.frame * (y - pc.origin);
      Evaluation e = lift_profile(base, local);
      const double val = e.value + p->m1 * pc.ell.value(y);
      if (val > top + 1e-14) {
        top = val;
        active = static_cast<int>(i);
        ties = 0;
        best.gradient = pc.zoom * pc.frame.transpose() * e.gradient + p->m1 * pc.ell.normal;
        best.hessian = pc.zoom * pc.zoom * pc.frame.transpose() * e.hessian * pc.frame;
        best.smooth = e.smooth;
      } else if (active >= 0 && std::abs(val - top) <= 1e-14) {
        ++ties;
      }
    }
    best.value = p->m2 * top;
    best.gradient *= p->m2;
    best.hessian *= p->m2;
    if (ties > 0) {
      best.smooth = false;
      best.hessian.setConstant(kNaN);
    }
    return best;
  }
  auto prof = profile();
  if (!prof) {  // one-dimensional radial power
    const auto& rp = std::get<RadialPower>(params_);
    const double a = radial_alpha(rp.n, rp.q), c = radial_coeff(rp.n, rp.q), t = std::abs(y[0]);
    Evaluation e;
    e.value = c * std::pow(t, a);
    e.gradient = Vec::Constant(1, c * a * std::pow(t, a - 1) * (y[0] < 0 ? -1 : 1));
    e.hessian = Mat::Constant(1, 1, c * a * (a - 1) * std::pow(t, a - 2));
    return e;
  }
  return lift_profile(*prof, y);
}

Evaluation AnalyticExample::eval(const Vec& x) const {
  if (x.size() != dim()) throw AnalyticError("dimension mismatch");
  if (!in_validity_unscaled(sigma_ * x)) throw AnalyticError("outside {r <= tau}");
  return eval_formula(x);
}

Evaluation AnalyticExample::eval_formula(const Vec& x) const {
  if (x.size() != dim()) throw AnalyticError("dimension mismatch");
  const Vec y = sigma_ * x;
  Evaluation e = eval_unscaled(y);
  if (sigma_ != 1.0) {
    const double a = radial_alpha(dim(), q());
    e.value *= std::pow(sigma_, -a);
    e.gradient *= std::pow(sigma_, 1.0 - a);
    e.hessian *= std::pow(sigma_, 2.0 - a);
  }
  return e;
}

double AnalyticExample::det_hessian(const Vec& x) const {
  if (kind() == FamilyKind::polytope_sub || dim() < 2) {
    Evaluation e = eval(x);
    if (!e.smooth) throw AnalyticError("on singular set");
    return e.hessian.determinant();
  }
  const Vec y = sigma_ * x;
  if (!in_validity_unscaled(y)) throw AnalyticError("outside {r <= tau}");
  const auto prof = profile();
  const auto [rho, r] = split_radii(y, prof->k);
  const double scale = std::pow(sigma_, dim() * (2.0 - radial_alpha(dim(), q())));
  return scale * symmetric_det(*prof, rho, r);
}

double AnalyticExample::displayed_det(const Vec& x) const {
  const Vec y = sigma_ * x;
  const int n = dim();
  const double scale = std::pow(sigma_, n * (2.0 - radial_alpha(n, q())));
  switch (kind()) {
    case FamilyKind::family_a: {
      const auto& a = std::get<FamilyA>(params_);
      const auto [rho, r] = split_radii(y, a.k);
      if (!(rho > 0) || !(r > 0)) throw AnalyticError("on symmetry axis");
      const double b = family_exponents(kind(), n, a.k, a.q).exponent, f = f_of(r);
      return scale * std::pow(rho, a.q) * std::pow(1 + b * std::pow(rho, b - 1) * f, n - a.k - 1) *
             (b * (b - 1) * f - b * b * r * r);
    }
    case FamilyKind::family_b: {
      const auto& b = std::get<FamilyB>(params_);
      const auto [rho, r] = split_radii(y, b.k);
      if (!(rho > 0) || !(r > 0)) throw AnalyticError("on symmetry axis");
      const double s = b.s, g = gamma_of(n, b.k, b.q, s, b.rule), f = f_of(r), pg = std::pow(rho, g - s);
      return scale * std::pow(rho, b.q * s) * std::pow(s + g * pg * f, n - b.k - 1) *
             (s * (s - 1) + g * (g - 1) * pg * f - g * g * pg * r * r);
    }
    case FamilyKind::cylinder: {
      const auto [rho, r] = split_radii(y, 1);
      if (!(rho > 0) || !(r > 0)) throw AnalyticError("on symmetry axis");
      const double s = (q() + 2.0) / 2.0, d = std::max(rho - 0.5, 0.0), f = f_of(r);
      if (d == 0) return 0.0;
      return scale * std::pow((1 + s * std::pow(d, s - 1) * f) / rho, n - 2) * std::pow(d, 2 * s - 2) *
             (s * (s - 1) * f - s * s * r * r);
    }
    case FamilyKind::radial_power: return std::pow(value(x), q());
    case FamilyKind::polytope_sub: break;
  }
  throw AnalyticError("no displayed determinant for polytope subsolutions");
}

ResidualResult subsolution_residual(const AnalyticExample& e, const std::vector<Vec>& sample) {
  if (sample.empty()) throw AnalyticError("empty sample");
  ResidualResult out;
  out.min_residual = kInf;
  for (const auto& x : sample) {
    const double w = e.value(x);
    const double res = e.det_hessian(x) - e.c_sub() * std::pow(std::max(w, 0.0), e.q());
    if (res < out.min_residual) {
      out.min_residual = res;
      out.argmin = x;
    }
  }
  return out;
}

double calibrate_c(AnalyticExample& e, const std::vector<Vec>& sample) {
  double c = kInf;
  for (const auto& x : sample) {
    const Evaluation ev = e.eval(x);
    if (!(ev.value > 0) || !ev.smooth) continue;
    double det;
    try {
      det = e.det_hessian(x);
    } catch (const AnalyticError&) {
      continue;
    }
    c = std::min(c, det / std::pow(ev.value, e.q()));
  }
  if (!std::isfinite(c)) throw AnalyticError("no sample point with w > 0");
  e.set_c_sub(c);
  return c;
}

AnalyticExample rescale_solution(const AnalyticExample& e, double tau) {
  if (!(tau > 0)) throw AnalyticError("non-positive tau");
  AnalyticExample out = e;
  out.set_sigma(e.sigma() * tau);
  return out;
}

ScalarField rescale_solution(const ScalarField& v, double tau, double q) {
  if (!(tau > 0)) throw AnalyticError("non-positive tau");
  const int n = v.grid.dim();
  if (!(q < n)) throw AnalyticError("q >= n");
  std::vector<double> lo = v.grid.lo(), hi = v.grid.hi();
  for (auto& a : lo) a /= tau;
  for (auto& a : hi) a /= tau;
  ScalarField out(Grid(lo, hi, v.grid.res()), v.mask);
  const double factor = std::pow(tau, -radial_alpha(n, q));
  for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = v.values[i] * factor;
  return out;
}

std::vector<Vec> halton_points(const Vec& lo, const Vec& hi, std::size_t count,
                               const std::function<bool(const Vec&)>& keep, std::uint64_t seed) {
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  const int n = static_cast<int>(lo.size());
  if (n > 8) throw AnalyticError("dimension too large for the sampler");
  std::vector<Vec> out;
  std::uint64_t idx = 1 + seed * 7919;
  const std::uint64_t limit = idx + 1000 * (count + 10);
  while (out.size() < count && idx < limit) {
    Vec x(n);
    for (int a = 0; a < n; ++a) {
      double f = 1.0, r = 0.0;
      for (std::uint64_t i = idx; i > 0; i /= primes[a]) {
        f /= primes[a];
        r += f * static_cast<double>(i % primes[a]);
      }
      x[a] = lo[a] + r * (hi[a] - lo[a]);
    }
    ++idx;
    if (!keep || keep(x)) out.push_back(std::move(x));
  }
  return out;
}

namespace {

// Natural domain of the unscaled example as a box plus membership test.
struct NaturalDomain {
  Vec lo, hi;
  std::function<bool(const Vec&)> inside;
  double scale = 1.0;
};

NaturalDomain natural_domain(const AnalyticExample& e) {
  const int n = e.dim();
  NaturalDomain d;
  switch (e.kind()) {
    case FamilyKind::family_a:
    case FamilyKind::family_b: {
      const double t = e.tau();
      d.lo = Vec::Constant(n, -t);
      d.hi = Vec::Constant(n, t);
      d.inside = [t](const Vec& y) { return y.norm() <= t; };
      d.scale = t;
      break;
    }
    case FamilyKind::cylinder: {
      d.lo = Vec::Constant(n, -1.0);
      d.hi = Vec::Constant(n, 1.0);
      d.lo[n - 1] = -e.tau();
      d.hi[n - 1] = e.tau();
      d.inside = [](const Vec&) { return true; };
      d.scale = 1.0;
      break;
    }
    case FamilyKind::radial_power: {
      d.lo = Vec::Constant(n, -1.0);
      d.hi = Vec::Constant(n, 1.0);
      d.inside = [](const Vec& y) { return y.norm() <= 1.0; };
      d.scale = 1.0;
      break;
    }
    case FamilyKind::polytope_sub: {
      const auto& p = std::get<PolytopeSub>(e.params());
      Vec lo = Vec::Constant(n, kInf), hi = Vec::Constant(n, -kInf);
      for (const auto& v : polytope_vertices(p.polytope, n)) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
      }
      const Vec pad = 0.5 * (hi - lo);
      d.lo = lo - pad;
      d.hi = hi + pad;
      d.inside = [](const Vec&) { return true; };
      d.scale = pad.maxCoeff();
      break;
    }
  }
  return d;
}

}  // namespace

std::vector<Vec> validity_sample(const AnalyticExample& e, std::size_t count, std::uint64_t seed) {
  const NaturalDomain d = natural_domain(e);
  const double margin = 0.02 * d.scale;
  const double sigma = e.sigma();
  auto keep = [&](const Vec& y) {
    if (!d.inside(y)) return false;
    if (e.kind() == FamilyKind::polytope_sub) {
      Evaluation ev = e.eval(y / sigma);
      return ev.smooth && ev.value > 0;
    }
    int k = 1;
    if (e.kind() == FamilyKind::family_a) k = std::get<FamilyA>(e.params()).k;
    if (e.kind() == FamilyKind::family_b) k = std::get<FamilyB>(e.params()).k;
    const auto [rho, r] = split_radii(y, k);
    if (rho < margin || r < margin) return false;
    if (e.kind() == FamilyKind::cylinder && rho - 0.5 < margin) return false;
    return true;
  };
  std::vector<Vec> pts = halton_points(d.lo, d.hi, count, keep, seed);
  for (auto& p : pts) p /= sigma;
  return pts;
}

double choose_tau(AnalyticExample& e) {
  if (e.kind() == FamilyKind::radial_power || e.kind() == FamilyKind::polytope_sub)
    throw AnalyticError("tau selection applies to the symmetric families");
  const int n = e.dim();
  const int per_axis = 20;
  for (int j = 0; j <= 10; ++j) {
    AnalyticExample trial = e;
    trial.set_tau(std::ldexp(1.0, -j));
    trial.set_sigma(1.0);
    const NaturalDomain d = natural_domain(trial);
    std::vector<Vec> sample;
    std::vector<int> ijk(n, 0);
    while (true) {
      Vec y(n);
      for (int a = 0; a < n; ++a) y[a] = d.lo[a] + (d.hi[a] - d.lo[a]) * (ijk[a] + 0.5) / per_axis;
      if (d.inside(y)) sample.push_back(y);
      int a = 0;
      while (a < n && ijk[a] == per_axis - 1) ijk[a++] = 0;
      if (a == n) break;
      ++ijk[a];
    }
    bool psd = true;
    std::vector<Vec> positive;
    for (const auto& y : sample) {
      const Evaluation ev = trial.eval(y);
      if (!ev.smooth) continue;
      Eigen::SelfAdjointEigenSolver<Mat> es(ev.hessian);
      const double tr = std::abs(ev.hessian.trace());
      if (es.eigenvalues().minCoeff() < -1e-8 * std::max(tr, 1e-300)) {
        psd = false;
        break;
      }
      if (ev.value > 0) positive.push_back(y);
    }
    if (!psd || positive.empty()) continue;
    // The infimum of det / w^q sits next to the zero set, which the lattice
    // resolves poorly: add points at geometric distances from it.
    int k = 1;
    if (trial.kind() == FamilyKind::family_a) k = std::get<FamilyA>(trial.params()).k;
    if (trial.kind() == FamilyKind::family_b) k = std::get<FamilyB>(trial.params()).k;
    const double rho0 = trial.kind() == FamilyKind::cylinder ? 0.5 : 0.0;
    Vec diag = Vec::Zero(n);
    diag.head(n - k).setConstant(1.0 / std::sqrt(n - k));
    for (const Vec& u : {Vec(Vec::Unit(n, 0)), diag})
      for (int i = 0; i <= 60; ++i)
        for (int m = 1; m <= 20; ++m) {
          const double rho = rho0 + d.scale * std::pow(10.0, -4.0 + 4.0 * i / 60);
          const Vec base = rho * u;
          auto ok = [&](const Vec& y) {
            return d.inside(y) && (y.array() <= d.hi.array()).all() && (y.array() >= d.lo.array()).all();
          };
          if (!ok(base)) continue;
          double lo = 0, hi = d.hi[n - 1];
          for (int b = 0; b < 40; ++b) {
            const double mid = 0.5 * (lo + hi);
            Vec y = base;
            y[n - 1] += mid;
            (ok(y) ? lo : hi) = mid;
          }
          Vec y = base;
          y[n - 1] += lo * m / 20.0;
          if (trial.value(y) > 0) positive.push_back(y);
        }
    double c;
    try {
      c = calibrate_c(trial, positive);
    } catch (const AnalyticError&) {
      continue;
    }
    if (c > 0) {
      e.set_tau(trial.tau());
      e.set_c_sub(c);
      return trial.tau();
    }
  }
  throw AnalyticError("no admissible tau found");
}

double fd_step(const AnalyticExample& e, const Vec& x) {
  const Vec y = e.sigma() * x;
  double reach = y.norm();
  int k = 1;
  if (e.kind() == FamilyKind::family_a) k = std::get<FamilyA>(e.params()).k;
  if (e.kind() == FamilyKind::family_b) k = std::get<FamilyB>(e.params()).k;
  if (e.kind() != FamilyKind::radial_power && e.kind() != FamilyKind::polytope_sub) {
    auto [rho, r] = split_radii(y, k);
    if (e.kind() == FamilyKind::cylinder) rho -= 0.5;
    reach = std::min({reach, std::abs(rho), r});
  }
  return 0.02 * std::max(reach, 1e-6) / e.sigma();
}

double fd_hessian_det(const std::function<double(const Vec&)>& f, const Vec& x, double step) {
  const int n = static_cast<int>(x.size());
  const double f0 = f(x);
  auto hessian = [&](double h) {
    Mat H(n, n);
    for (int i = 0; i < n; ++i) {
      Vec p = x, m = x;
      p[i] += h;
      m[i] -= h;
      H(i, i) = (f(p) - 2 * f0 + f(m)) / (h * h);
      for (int j = 0; j < i; ++j) {
        Vec pp = x, pm = x, mp = x, mm = x;
        pp[i] += h, pp[j] += h;
        pm[i] += h, pm[j] -= h;
        mp[i] -= h, mp[j] += h;
        mm[i] -= h, mm[j] -= h;
        H(i, j) = H(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h);
      }
    }
    return H;
  };
  // Richardson: the O(h^2) terms cancel.
  const Mat H = (4 * hessian(step / 2) - hessian(step)) / 3;
  return H.determinant();
}

}  // namespace maob
