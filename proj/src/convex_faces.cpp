#include "maob/convex_faces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

namespace maob {

const char* to_string(FaceKind k) {
  return k == FaceKind::non_strictly_convex ? "non-strictly-convex-face" : "strictly-convex-point";
}

std::vector<const Face*> FaceDecomposition::non_strictly_convex() const {
  std::vector<const Face*> out;
  for (const auto& f : faces)
    if (f.kind == FaceKind::non_strictly_convex) out.push_back(&f);
  return out;
}

std::vector<std::size_t> FaceDecomposition::nsc_nodes() const {
  std::vector<std::size_t> out;
  for (const auto* f : non_strictly_convex()) out.insert(out.end(), f->nodes.begin(), f->nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Orthonormal basis of the hyperplane orthogonal to the unit vector nu.
Mat tangent_basis(const Vec& nu) {
  const int n = static_cast<int>(nu.size());
  Mat full = Mat::Identity(n, n);
  Eigen::HouseholderQR<Mat> qr(nu);
  Mat q = qr.householderQ() * full;
  return q.rightCols(n - 1);
}

std::vector<Vec> sample_directions(int n, int count) {
  std::vector<Vec> dirs;
  if (n == 1) {
    dirs.push_back(Vec::Constant(1, 1.0));
    dirs.push_back(Vec::Constant(1, -1.0));
    return dirs;
  }
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * i / count;
      Vec d(2);
      d << std::cos(t), std::sin(t);
      dirs.push_back(d);
    }
    return dirs;
  }
  // Fibonacci sphere plus the lattice directions with entries in {-1,0,1}.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vec d = Vec::Zero(n);
    d[0] = r * std::cos(golden * i);
    d[1] = r * std::sin(golden * i);
    d[2] = z;
    dirs.push_back(d);
  }
  std::vector<int> e(n, -1);
  while (true) {
    Vec d(n);
    for (int a = 0; a < n; ++a) d[a] = e[a];
    if (d.norm() > 0) dirs.push_back(d.normalized());
    int a = 0;
    while (a < n && e[a] == 1) e[a++] = -1;
    if (a == n) break;
    ++e[a];
  }
  return dirs;
}

}  // namespace

int flat_rank(const std::vector<Vec>& points, const Vec& normal, double tol, std::vector<Vec>* flat_axes) {
  if (points.size() < 2) return 0;
  const int n = static_cast<int>(normal.size());
  const Vec nu = normal.normalized();
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) top = std::max(top, nu.dot(p));
  std::vector<double> depth(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) depth[i] = top - nu.dot(points[i]);

  const Mat tb = tangent_basis(nu);
  Vec mean = Vec::Zero(n);
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Mat coords(static_cast<int>(points.size()), n - 1);
  for (std::size_t i = 0; i < points.size(); ++i) coords.row(static_cast<int>(i)) = (tb.transpose() * (points[i] - mean)).transpose();
  if (n - 1 == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(coords, Eigen::ComputeThinV);
  const Mat axes = svd.matrixV();

  int rank = 0;
  for (int j = 0; j < axes.cols(); ++j) {
    const Vec s = coords * axes.col(j);
    const double lo = s.minCoeff(), hi = s.maxCoeff();
    const double range = hi - lo;
    if (range <= 2.0 * tol) continue;
    double low_end = std::numeric_limits<double>::infinity(), high_end = low_end;
    for (int i = 0; i < s.size(); ++i) {
      if (s[i] <= lo + 0.15 * range) low_end = std::min(low_end, depth[i]);
      if (s[i] >= hi - 0.15 * range) high_end = std::min(high_end, depth[i]);
    }
    if (low_end <= 0.25 * tol && high_end <= 0.25 * tol) {
      ++rank;
      if (flat_axes) flat_axes->push_back(tb * axes.col(j));
    }
  }
  return rank;
}

namespace {

// A sampled direction only approximates the normal of a flat face. Remove
// its components along the face's long axes and keep the result when it
// still supports the whole face.
Vec refine_normal(const std::vector<Vec>& face, const std::vector<Vec>& pts, const Vec& normal, double tol) {
  if (face.size() < 2) return normal;
  const int n = static_cast<int>(normal.size());
  Vec mean = Vec::Zero(n);
  for (const auto& p : face) mean += p;
  mean /= static_cast<double>(face.size());
  Mat coords(static_cast<int>(face.size()), n);
  for (std::size_t i = 0; i < face.size(); ++i) coords.row(static_cast<int>(i)) = (face[i] - mean).transpose();
  Eigen::JacobiSVD<Mat> svd(coords, Eigen::ComputeThinV);
  Vec nu = normal;
  for (int j = 0; j < n; ++j) {
    const Vec ax = svd.matrixV().col(j);
    const Vec s = coords * ax;
    if (s.maxCoeff() - s.minCoeff() > 2.0 * tol) nu -= nu.dot(ax) * ax;
  }
  if (nu.norm() < 0.5) return normal;
  nu.normalize();
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) top = std::max(top, nu.dot(p));
  for (const auto& p : face)
    if (nu.dot(p) < top - tol) return normal;
  return nu;
}

}  // namespace

FaceDecomposition exposed_faces(const CellSet& K, const ConvexDomain& domain, FaceOptions opts) {
  if (K.empty()) throw GeometryError("no coincidence set");
  const Grid& grid = K.grid;
  const int n = grid.dim();
  FaceDecomposition out;
  out.grid = grid;
  out.tol_face = opts.tol_face > 0 ? opts.tol_face : 1.5 * grid.max_h();
  out.tol_boundary = opts.tol_boundary > 0 ? opts.tol_boundary : 1.5 * grid.max_h();
  out.full_cells = K.full_cells();
  out.positive_measure = out.full_cells > (std::size_t{1} << n);

  // Support points always lie on the set's own boundary: members with a face
  // neighbour outside the set.
  std::vector<std::uint8_t> in(grid.node_count(), 0);
  for (auto m : K.members) in[m] = 1;
  std::vector<std::size_t> rim;
  std::vector<int> ijk(n);
  for (auto m : K.members) {
    grid.unravel(m, ijk);
    bool edge = false;
    for (int a = 0; a < n && !edge; ++a) {
      if (ijk[a] == 0 || ijk[a] == grid.res()[a]) edge = true;
      else if (!in[m + grid.stride(a)] || !in[m - grid.stride(a)]) edge = true;
    }
    if (edge) rim.push_back(m);
  }
  if (rim.empty()) rim = K.members;
  std::vector<Vec> pts;
  pts.reserve(rim.size());
  for (auto m : rim) pts.push_back(grid.point(m));

  const int count = opts.directions > 0 ? opts.directions : (n == 2 ? 1440 : 3000);
  std::vector<Vec> dirs = sample_directions(n, count);
  if (n == 2 && pts.size() >= 3) {
    try {
      for (const auto& hs : hull_halfspaces(pts)) dirs.push_back(hs.normal.normalized());
    } catch (const GeometryError&) {
      // collinear rim: sampled directions suffice
    }
  }

  std::map<std::vector<std::size_t>, Vec> unique_faces;
  std::vector<std::uint8_t> supported(grid.node_count(), 0);
  for (const auto& d : dirs) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) top = std::max(top, d.dot(p));
    std::vector<std::size_t> face;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (d.dot(pts[i]) >= top - out.tol_face) face.push_back(rim[i]);
    for (auto f : face) supported[f] = 1;
    std::sort(face.begin(), face.end());
    unique_faces.emplace(std::move(face), d);
  }
  for (std::size_t i = 0; i < supported.size(); ++i)
    if (supported[i]) out.hull_boundary.push_back(i);

  // Keep maximal faces only.
  std::vector<std::pair<std::vector<std::size_t>, Vec>> cand(unique_faces.begin(), unique_faces.end());
  std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_node;  // node -> kept face ids
  std::vector<std::pair<std::vector<std::size_t>, Vec>> kept;
  for (auto& c : cand) {
    bool subset = false;
    auto it = by_node.find(c.first.front());
    if (it != by_node.end()) {
      for (auto id : it->second) {
        const auto& big = kept[id].first;
        if (std::includes(big.begin(), big.end(), c.first.begin(), c.first.end())) {
          subset = true;
          break;
        }
      }
    }
    if (subset) continue;
    const std::size_t id = kept.size();
    for (auto node : c.first) by_node[node].push_back(id);
    kept.push_back(std::move(c));
  }

  for (auto& [nodes, normal] : kept) {
    Face f;
    f.nodes = nodes;
    std::vector<Vec> fp;
    fp.reserve(nodes.size());
    for (auto m : nodes) fp.push_back(grid.point(m));
    normal = refine_normal(fp, pts, normal, out.tol_face);
    f.normal = normal;
    std::vector<Vec> axes;
    f.affine_dim = std::min(flat_rank(fp, normal, out.tol_face, &axes), n - 1);
    f.on_domain_boundary = std::all_of(fp.begin(), fp.end(), [&](const Vec& p) {
      return domain.boundary_distance(p) <= out.tol_boundary;
    });
    if (f.affine_dim >= 1) {
      bool reach = true;
      for (const auto& ax : axes) {
        std::size_t imin = 0, imax = 0;
        for (std::size_t i = 1; i < fp.size(); ++i) {
          if (ax.dot(fp[i]) < ax.dot(fp[imin])) imin = i;
          if (ax.dot(fp[i]) > ax.dot(fp[imax])) imax = i;
        }
        reach = reach && domain.boundary_distance(fp[imin]) <= out.tol_boundary &&
                domain.boundary_distance(fp[imax]) <= out.tol_boundary;
      }
      f.extremes_on_boundary = reach;
    }
    f.kind = (f.affine_dim >= 1 && f.extremes_on_boundary && !f.on_domain_boundary)
                 ? FaceKind::non_strictly_convex
                 : FaceKind::strictly_convex;
    out.faces.push_back(std::move(f));
  }
  return out;
}

int local_dimension(const Grid& grid, const std::vector<std::size_t>& nodes, double radius) {
  if (nodes.empty()) return 0;
  const int n = grid.dim();
  std::vector<std::uint8_t> in(grid.node_count(), 0);
  for (auto m : nodes) in[m] = 1;
  std::vector<int> reach(n);
  for (int a = 0; a < n; ++a) reach[a] = static_cast<int>(std::ceil(radius / grid.h()[a]));
  const std::size_t step = std::max<std::size_t>(1, nodes.size() / 500);
  std::vector<int> ranks;
  std::vector<int> c(n), o(n), ijk(n);
  for (std::size_t k = 0; k < nodes.size(); k += step) {
    grid.unravel(nodes[k], c);
    const Vec x0 = grid.point(nodes[k]);
    std::vector<Vec> nb;
    for (int a = 0; a < n; ++a) o[a] = -reach[a];
    while (true) {
      bool valid = true;
      for (int a = 0; a < n; ++a) {
        ijk[a] = c[a] + o[a];
        if (ijk[a] < 0 || ijk[a] > grid.res()[a]) valid = false;
      }
      if (valid) {
        const std::size_t idx = grid.index(ijk);
        if (in[idx]) {
          Vec p = grid.point(idx);
          if ((p - x0).norm() <= radius) nb.push_back(p);
        }
      }
      int a = 0;
      while (a < n && o[a] == reach[a]) {
        o[a] = -reach[a];
        ++a;
      }
      if (a == n) break;
      ++o[a];
    }
    if (nb.size() < 2) {
      ranks.push_back(0);
      continue;
    }
    Vec mean = Vec::Zero(n);
    for (const auto& p : nb) mean += p;
    mean /= static_cast<double>(nb.size());
    Mat cov = Mat::Zero(n, n);
    for (const auto& p : nb) cov += (p - mean) * (p - mean).transpose();
    cov /= static_cast<double>(nb.size());
    Eigen::SelfAdjointEigenSolver<Mat> es(cov);
    const Vec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const double top = ev.maxCoeff();
    int r = 0;
    for (int a = 0; a < n; ++a)
      if (ev[a] > 0.4 * top) ++r;
    ranks.push_back(r);
  }
  std::nth_element(ranks.begin(), ranks.begin() + ranks.size() / 2, ranks.end());
  return ranks[ranks.size() / 2];
}

}  // namespace maob
