#include "maob/polytope_subsolution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

namespace maob {

namespace {

void for_each_combination(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > m) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

int affine_rank(const std::vector<Vec>& pts, double tol) {
  if (pts.size() < 2) return 0;
  Mat d(pts.front().size(), static_cast<int>(pts.size()) - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) d.col(static_cast<int>(i) - 1) = pts[i] - pts[0];
  Eigen::FullPivLU<Mat> lu(d);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

bool active(const Halfspace& h, const Vec& v, double tol) { return std::abs(h.signed_distance(v)) <= tol; }

}  // namespace

std::vector<std::vector<Vec>> polytope_faces(const std::vector<Halfspace>& facets, int n, int k) {
  if (k < 0 || k > n - 1) throw AnalyticError("face dimension out of range");
  const std::vector<Vec> verts = polytope_vertices(facets, n);
  if (verts.empty()) throw AnalyticError("empty polytope");
  double scale = 0;
  for (const auto& v : verts) scale = std::max(scale, v.norm());
  const double tol = 1e-9 * std::max(scale, 1.0);

  std::set<std::vector<int>> seen;
  std::vector<std::vector<Vec>> faces;
  for_each_combination(static_cast<int>(facets.size()), n - k, [&](const std::vector<int>& combo) {
    std::vector<int> ids;
    for (std::size_t v = 0; v < verts.size(); ++v) {
      bool on = true;
      for (int f : combo) on = on && active(facets[f], verts[v], tol);
      if (on) ids.push_back(static_cast<int>(v));
    }
    if (ids.empty() || seen.count(ids)) return;
    std::vector<Vec> pts;
    for (int i : ids) pts.push_back(verts[i]);
    if (affine_rank(pts, 1e-9) != k) return;
    seen.insert(ids);
    faces.push_back(std::move(pts));
  });
  return faces;
}

namespace {

// Quasi-random interior points of a domain plus its vertices.
std::vector<Vec> domain_sample(const ConvexDomain& d, std::size_t count, std::uint64_t seed) {
  std::vector<Vec> pts = halton_points(d.bbox_lo(), d.bbox_hi(), count,
                                       [&](const Vec& x) { return d.contains(x, 1e-12); }, seed);
  const std::vector<Vec>& verts = d.vertices();
  pts.insert(pts.end(), verts.begin(), verts.end());
  return pts;
}

}  // namespace

AnalyticExample polytope_subsolution(const ConvexDomain& P, const ConvexDomain& omega, double q, double m1,
                                     double m2, std::uint64_t seed) {
  const int n = P.dim();
  if (omega.dim() != n) throw AnalyticError("dimension mismatch");
  if (!(q >= 0 && q < n) || !(n + q > 2)) throw AnalyticError("requires 0 <= q < n and n + q > 2");
  const std::vector<Halfspace>& facets = P.halfspaces();
  if (facets.empty()) throw AnalyticError("P must be a polytope");

  PolytopeSub sub;
  sub.n = n;
  sub.q = q;
  sub.k = static_cast<int>(std::ceil((n + q) / 2.0)) - 1;
  sub.m1 = m1;
  sub.m2 = 1.0;
  sub.polytope = facets;
  AnalyticExample base = AnalyticExample::family_a(n, sub.k, q);
  sub.tau_base = choose_tau(base);

  std::vector<Vec> omega_pts = omega.vertices();
  if (omega_pts.empty()) {  // ball: use its bounding box corners
    const Vec lo = omega.bbox_lo(), hi = omega.bbox_hi();
    for (int mask = 0; mask < (1 << n); ++mask) {
      Vec c(n);
      for (int a = 0; a < n; ++a) c[a] = (mask >> a) & 1 ? hi[a] : lo[a];
      omega_pts.push_back(c);
    }
  }

  const double tol = 1e-9 * std::max(1.0, (P.bbox_hi() - P.bbox_lo()).norm());
  for (const auto& face : polytope_faces(facets, n, sub.k)) {
    PolytopePiece pc;
    pc.face_dim = sub.k;
    pc.origin = Vec::Zero(n);
    for (const auto& v : face) pc.origin += v;
    pc.origin /= static_cast<double>(face.size());

    Mat span(n, static_cast<int>(face.size()) - 1);
    for (std::size_t i = 1; i < face.size(); ++i) span.col(static_cast<int>(i) - 1) = face[i] - face[0];
    const AffineSubspace along = AffineSubspace::from_span(pc.origin, span);
    Eigen::HouseholderQR<Mat> qr(along.basis);
    const Mat full = qr.householderQ() * Mat::Identity(n, n);
    const Mat normal_space = full.rightCols(n - sub.k);
    pc.frame = Mat(n, n);
    pc.frame.topRows(n - sub.k) = normal_space.transpose();
    pc.frame.bottomRows(sub.k) = along.basis.transpose();

    Vec nu = Vec::Zero(n);
    for (const auto& f : facets) {
      bool contains_face = true;
      for (const auto& v : face) contains_face = contains_face && std::abs(f.signed_distance(v)) <= tol;
      if (contains_face) nu += f.normal.normalized();
    }
    nu.normalize();
    pc.ell = Halfspace{nu, nu.dot(pc.origin)};

    double reach = 0;
    for (const auto& x : omega_pts) reach = std::max(reach, (along.basis.transpose() * (x - pc.origin)).norm());
    pc.zoom = reach > 0 ? sub.tau_base / reach : 1.0;
    sub.pieces.push_back(std::move(pc));
  }
  if (sub.pieces.empty()) throw AnalyticError("polytope has no faces of the required dimension");

  // P subset of every {Phi_i + M1 l_i <= 0}.
  const std::vector<Vec> inner = domain_sample(P, 400 * n, seed);
  const SymmetricProfile prof = *base.profile();
  for (const auto& x : inner) {
    for (const auto& pc : sub.pieces) {
      const double phi = lift_profile(prof, pc.zoom * pc.frame * (x - pc.origin)).value;
      if (phi + m1 * pc.ell.value(x) > 1e-12) throw AnalyticError("increase M1");
    }
  }

  AnalyticExample unit{sub};
  std::vector<Vec> outer;
  for (const auto& x : domain_sample(omega, 3000 * n, seed + 1)) {
    const Evaluation e = unit.eval(x);
    if (e.smooth && e.value > 1e-8) outer.push_back(x);
  }
  const double c = calibrate_c(unit, outer);
  if (m2 <= 0) m2 = std::pow(c, -1.0 / (n - q));
  sub.m2 = m2;
  AnalyticExample out{sub};
  out.set_tau(sub.tau_base);
  out.set_c_sub(c * std::pow(m2, n - q));
  return out;
}

AnalyticExample polytope_subsolution_auto(const ConvexDomain& P, const ConvexDomain& omega, double q,
                                          double m1_init, double m2, int max_doublings, std::uint64_t seed) {
  double m1 = m1_init > 0 ? m1_init : 1.0;
  for (int i = 0; i <= max_doublings; ++i, m1 *= 2) {
    try {
      return polytope_subsolution(P, omega, q, m1, m2, seed);
    } catch (const AnalyticError& e) {
      if (std::string(e.what()) != "increase M1") throw;
    }
  }
  throw AnalyticError("M1 search exceeded cap");
}

}  // namespace maob
