#include "maob/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace maob {

// ---------------------------------------------------------------- Grid

Grid::Grid(std::vector<double> lo, std::vector<double> hi, std::vector<int> res)
    : lo_(std::move(lo)), hi_(std::move(hi)), res_(std::move(res)) {
  const std::size_t n = lo_.size();
  if (n == 0 || hi_.size() != n || res_.size() != n)
    throw GeometryError("grid: inconsistent dimensions");
  h_.resize(n);
  stride_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (!(lo_[a] < hi_[a])) throw GeometryError("grid: lo must be < hi on every axis");
    if (res_[a] < 3) throw GeometryError("grid: at least 3 cells per axis");
    h_[a] = (hi_[a] - lo_[a]) / res_[a];
  }
  std::size_t s = 1;
  for (std::size_t a = n; a-- > 0;) {
    stride_[a] = s;
    s *= static_cast<std::size_t>(res_[a] + 1);
  }
  count_ = s;
}

double Grid::max_h() const { return *std::max_element(h_.begin(), h_.end()); }
double Grid::min_h() const { return *std::min_element(h_.begin(), h_.end()); }

double Grid::cell_volume() const {
  double v = 1.0;
  for (double x : h_) v *= x;
  return v;
}

std::size_t Grid::index(std::span<const int> ijk) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim(); ++a) idx += static_cast<std::size_t>(ijk[a]) * stride_[a];
  return idx;
}

void Grid::unravel(std::size_t idx, std::span<int> ijk) const {
  for (int a = 0; a < dim(); ++a) {
    ijk[a] = static_cast<int>(idx / stride_[a]);
    idx %= stride_[a];
  }
}

Vec Grid::point(std::size_t idx) const {
  Vec x(dim());
  for (int a = 0; a < dim(); ++a) {
    const int i = static_cast<int>(idx / stride_[a]);
    idx %= stride_[a];
    x[a] = lo_[a] + i * h_[a];
  }
  return x;
}

bool Grid::operator==(const Grid& o) const {
  return lo_ == o.lo_ && hi_ == o.hi_ && res_ == o.res_;
}

// ---------------------------------------------------------------- polytopes

namespace {

void combinations(int m, int k, std::vector<int>& cur, int start,
                  const std::function<void(const std::vector<int>&)>& fn) {
  if (static_cast<int>(cur.size()) == k) {
    fn(cur);
    return;
  }
  for (int i = start; i < m; ++i) {
    cur.push_back(i);
    combinations(m, k, cur, i + 1, fn);
    cur.pop_back();
  }
}

bool near_duplicate(const std::vector<Vec>& pts, const Vec& x, double tol) {
  return std::any_of(pts.begin(), pts.end(), [&](const Vec& p) { return (p - x).norm() <= tol; });
}

}  // namespace

std::vector<Vec> polytope_vertices(const std::vector<Halfspace>& faces, int dim, double tol) {
  std::vector<Vec> verts;
  const int m = static_cast<int>(faces.size());
  if (m < dim) return verts;
  double scale = 1.0;
  for (const auto& f : faces) scale = std::max(scale, std::abs(f.offset) / std::max(f.normal.norm(), 1e-300));
  std::vector<int> cur;
  combinations(m, dim, cur, 0, [&](const std::vector<int>& idx) {
    Mat a(dim, dim);
    Vec b(dim);
    for (int r = 0; r < dim; ++r) {
      a.row(r) = faces[idx[r]].normal.transpose();
      b[r] = faces[idx[r]].offset;
    }
    Eigen::FullPivLU<Mat> lu(a);
    if (lu.rank() < dim) return;
    Vec x = lu.solve(b);
    for (const auto& f : faces)
      if (f.value(x) > tol * scale * std::max(1.0, f.normal.norm())) return;
    if (!near_duplicate(verts, x, tol * scale * 10)) verts.push_back(x);
  });
  return verts;
}

std::vector<Halfspace> hull_halfspaces(const std::vector<Vec>& points) {
  if (points.empty()) throw GeometryError("degenerate domain: empty hull");
  const int n = static_cast<int>(points.front().size());
  std::vector<Halfspace> out;
  if (n == 1) {
    double lo = points[0][0], hi = points[0][0];
    for (const auto& p : points) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
    out.push_back({Vec::Constant(1, 1.0), hi});
    out.push_back({Vec::Constant(1, -1.0), -lo});
    return out;
  }
  if (n == 2) {
    std::vector<Vec> p = points;
    std::sort(p.begin(), p.end(), [](const Vec& a, const Vec& b) {
      return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
      return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Vec> hull(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
      hull[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
      hull[k++] = p[i];
    }
    hull.resize(k > 0 ? k - 1 : 0);
    if (hull.size() < 3) throw GeometryError("degenerate domain: hull has empty interior");
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Vec& a = hull[i];
      const Vec& b = hull[(i + 1) % hull.size()];
      Vec nrm(2);
      nrm << (b[1] - a[1]), -(b[0] - a[0]);  // outward for counter-clockwise order
      nrm.normalize();
      out.push_back({nrm, nrm.dot(a)});
    }
    return out;
  }
  if (n != 3) throw GeometryError("hull domains are supported for n <= 3");
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, p.norm());
  const double tol = 1e-10 * std::max(scale, 1.0);
  const int m = static_cast<int>(points.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Eigen::Vector3d a = points[i], b = points[j], c = points[k];
        Eigen::Vector3d nrm = (b - a).cross(c - a);
        if (nrm.norm() <= tol) continue;
        nrm.normalize();
        double off = nrm.dot(a);
        bool pos = false, neg = false;
        for (const auto& p : points) {
          double s = Eigen::Vector3d(p).dot(nrm) - off;
          if (s > tol) pos = true;
          if (s < -tol) neg = true;
        }
        if (pos && neg) continue;
        if (pos) nrm = -nrm, off = -off;
        bool dup = std::any_of(out.begin(), out.end(), [&](const Halfspace& h) {
          return (h.normal - Vec(nrm)).norm() < 1e-9 && std::abs(h.offset - off) < tol * 10;
        });
        if (!dup) out.push_back({Vec(nrm), off});
      }
  if (out.size() < 4) throw GeometryError("degenerate domain: hull has empty interior");
  return out;
}

// ---------------------------------------------------------------- ConvexDomain

ConvexDomain::ConvexDomain(Shape shape) : shape_(std::move(shape)) {
  if (auto* b = std::get_if<Ball>(&shape_)) {
    dim_ = static_cast<int>(b->center.size());
    if (!(b->radius > 0)) throw GeometryError("degenerate domain: ball radius must be positive");
    bbox_lo_ = b->center.array() - b->radius;
    bbox_hi_ = b->center.array() + b->radius;
    return;
  }
  if (auto* b = std::get_if<Box>(&shape_)) {
    dim_ = static_cast<int>(b->lo.size());
    if (b->hi.size() != b->lo.size()) throw GeometryError("box: inconsistent dimensions");
    for (int a = 0; a < dim_; ++a) {
      if (!(b->lo[a] < b->hi[a])) throw GeometryError("degenerate domain: box side must be positive");
      Vec nrm = Vec::Zero(dim_);
      nrm[a] = 1.0;
      halfspaces_.push_back({nrm, b->hi[a]});
      halfspaces_.push_back({-nrm, -b->lo[a]});
    }
    vertices_ = polytope_vertices(halfspaces_, dim_);
    bbox_lo_ = b->lo;
    bbox_hi_ = b->hi;
    return;
  }
  if (auto* p = std::get_if<Polytope>(&shape_)) {
    if (p->faces.empty()) throw GeometryError("degenerate domain: no halfspaces");
    dim_ = static_cast<int>(p->faces.front().normal.size());
    halfspaces_ = p->faces;
  } else {
    const auto& pts = std::get<Hull>(shape_).points;
    if (pts.empty()) throw GeometryError("degenerate domain: empty hull");
    dim_ = static_cast<int>(pts.front().size());
    halfspaces_ = hull_halfspaces(pts);
  }
  vertices_ = polytope_vertices(halfspaces_, dim_);
  bbox_lo_ = Vec::Constant(dim_, std::numeric_limits<double>::infinity());
  bbox_hi_ = Vec::Constant(dim_, -std::numeric_limits<double>::infinity());
  for (const auto& v : vertices_) {
    bbox_lo_ = bbox_lo_.cwiseMin(v);
    bbox_hi_ = bbox_hi_.cwiseMax(v);
  }
}

bool ConvexDomain::contains(const Vec& x, double tol) const { return boundary_distance(x) >= -tol; }

double ConvexDomain::boundary_distance(const Vec& x) const {
  if (auto* b = std::get_if<Ball>(&shape_)) return b->radius - (x - b->center).norm();
  if (auto* b = std::get_if<Box>(&shape_)) {
    double d = std::numeric_limits<double>::infinity();
    for (int a = 0; a < dim_; ++a) d = std::min({d, x[a] - b->lo[a], b->hi[a] - x[a]});
    return d;
  }
  double d = std::numeric_limits<double>::infinity();
  for (const auto& f : halfspaces_) d = std::min(d, -f.signed_distance(x));
  return d;
}

double ConvexDomain::exit_length(const Vec& x, const Vec& dir) const {
  if (auto* b = std::get_if<Ball>(&shape_)) {
    const Vec y = x - b->center;
    const double a = dir.squaredNorm();
    const double bb = y.dot(dir);
    const double c = y.squaredNorm() - b->radius * b->radius;
    const double disc = bb * bb - a * c;
    if (disc < 0) return 0.0;
    return std::max(0.0, (-bb + std::sqrt(disc)) / a);
  }
  double t = std::numeric_limits<double>::infinity();
  for (const auto& f : halfspaces_) {
    const double ad = f.normal.dot(dir);
    if (ad > 0) t = std::min(t, (f.offset - f.normal.dot(x)) / ad);
  }
  return std::max(0.0, t);
}

std::string ConvexDomain::describe() const {
  std::ostringstream os;
  if (auto* b = std::get_if<Ball>(&shape_)) {
    os << "ball center=(" << b->center.transpose() << ") radius=" << b->radius;
  } else if (auto* b = std::get_if<Box>(&shape_)) {
    os << "box lo=(" << b->lo.transpose() << ") hi=(" << b->hi.transpose() << ")";
  } else {
    os << (std::holds_alternative<Hull>(shape_) ? "hull" : "polytope") << " with "
       << halfspaces_.size() << " facets";
  }
  return os.str();
}

// ---------------------------------------------------------------- grids and masks

std::size_t GridMask::inside_count() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

GridMask mask_grid(const Grid& grid, const ConvexDomain& domain) {
  if (grid.dim() != domain.dim()) throw GeometryError("grid and domain dimensions differ");
  GridMask gm{grid, std::vector<std::uint8_t>(grid.node_count(), 0),
              std::vector<std::uint8_t>(grid.node_count(), 0)};
  const double tol = 1e-10 * std::max(1.0, domain.diameter());
  for (std::size_t i = 0; i < grid.node_count(); ++i)
    gm.inside[i] = domain.contains(grid.point(i), tol) ? 1 : 0;
  const int n = grid.dim();
  std::vector<int> ijk(n);
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    if (!gm.inside[i]) continue;
    grid.unravel(i, ijk);
    bool edge = false;
    for (int a = 0; a < n && !edge; ++a) {
      if (ijk[a] == 0 || ijk[a] == grid.res()[a]) {
        edge = true;
        break;
      }
      if (!gm.inside[i + grid.stride(a)] || !gm.inside[i - grid.stride(a)]) edge = true;
    }
    gm.boundary[i] = edge ? 1 : 0;
  }
  return gm;
}

GridMask make_grid(const ConvexDomain& domain, std::span<const int> res) {
  const int n = domain.dim();
  if (static_cast<int>(res.size()) != n) throw GeometryError("make_grid: res size must equal dimension");
  const Vec lo = domain.bbox_lo(), hi = domain.bbox_hi();
  for (int a = 0; a < n; ++a)
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]) || !(lo[a] < hi[a]))
      throw GeometryError("degenerate domain");
  std::vector<double> vlo(lo.data(), lo.data() + n), vhi(hi.data(), hi.data() + n);
  GridMask gm = mask_grid(Grid(vlo, vhi, std::vector<int>(res.begin(), res.end())), domain);
  if (gm.inside_count() == 0) throw GeometryError("degenerate domain");
  return gm;
}

GridMask make_grid(const ConvexDomain& domain, int res) {
  std::vector<int> r(domain.dim(), res);
  return make_grid(domain, r);
}

// ---------------------------------------------------------------- ScalarField

ScalarField::ScalarField(Grid g, std::vector<std::uint8_t> m, double fill)
    : grid(std::move(g)), values(grid.node_count(), std::numeric_limits<double>::quiet_NaN()), mask(std::move(m)) {
  if (mask.size() != grid.node_count()) throw GeometryError("field mask size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (mask[i]) values[i] = fill;
}

double ScalarField::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (mask[i]) m = std::max(m, values[i]);
  return m;
}

double ScalarField::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (mask[i]) m = std::min(m, values[i]);
  return m;
}

double ScalarField::interpolate(const Vec& x) const {
  const int n = grid.dim();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  for (int a = 0; a < n; ++a) {
    double s = (x[a] - grid.lo()[a]) / grid.h()[a];
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, grid.res()[a] - 1);
    base[a] = i;
    frac[a] = std::clamp(s - i, 0.0, 1.0);
  }
  double acc = 0.0, wsum = 0.0;
  std::vector<int> ijk(n);
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const int bit = (corner >> a) & 1;
      ijk[a] = base[a] + bit;
      w *= bit ? frac[a] : 1.0 - frac[a];
    }
    const std::size_t idx = grid.index(ijk);
    if (!mask[idx]) continue;
    acc += w * values[idx];
    wsum += w;
  }
  if (wsum > 1e-12) return acc / wsum;
  // No weighted inside corner: nearest inside corner of the cell.
  double best = std::numeric_limits<double>::infinity(), val = std::numeric_limits<double>::quiet_NaN();
  for (int corner = 0; corner < (1 << n); ++corner) {
    for (int a = 0; a < n; ++a) ijk[a] = base[a] + ((corner >> a) & 1);
    const std::size_t idx = grid.index(ijk);
    if (!mask[idx]) continue;
    const double d = (grid.point(idx) - x).norm();
    if (d < best) best = d, val = values[idx];
  }
  return val;
}

// ---------------------------------------------------------------- subspaces

AffineSubspace AffineSubspace::from_span(Vec point, const Mat& spanning, double tol) {
  const int n = static_cast<int>(point.size());
  std::vector<Vec> basis;
  for (int c = 0; c < spanning.cols(); ++c) {
    Vec v = spanning.col(c);
    for (const auto& b : basis) v -= b.dot(v) * b;
    for (const auto& b : basis) v -= b.dot(v) * b;  // second pass for orthogonality
    const double nv = v.norm();
    if (nv > tol * std::max(1.0, spanning.col(c).norm())) basis.push_back(v / nv);
  }
  Mat b(n, static_cast<int>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) b.col(static_cast<int>(c)) = basis[c];
  return {std::move(point), std::move(b)};
}

Vec AffineSubspace::project(const Vec& x) const {
  if (basis.cols() == 0) return point;
  return point + basis * (basis.transpose() * (x - point));
}

double dist_to_subspace(const Vec& x, const AffineSubspace& s) { return (x - s.project(x)).norm(); }

// ---------------------------------------------------------------- cell sets

bool CellSet::contains(std::size_t node) const {
  return std::binary_search(members.begin(), members.end(), node);
}

std::size_t CellSet::full_cells() const {
  const int n = grid.dim();
  std::vector<std::uint8_t> flag(grid.node_count(), 0);
  for (auto m : members) flag[m] = 1;
  std::vector<int> ijk(n);
  std::size_t count = 0;
  for (auto m : members) {
    grid.unravel(m, ijk);
    bool ok = true;
    for (int a = 0; a < n; ++a)
      if (ijk[a] >= grid.res()[a]) ok = false;
    if (!ok) continue;
    for (int corner = 1; corner < (1 << n) && ok; ++corner) {
      std::size_t idx = m;
      for (int a = 0; a < n; ++a)
        if ((corner >> a) & 1) idx += grid.stride(a);
      if (!flag[idx]) ok = false;
    }
    if (ok) ++count;
  }
  return count;
}

double sublevel_volume(const ScalarField& v, double level, const std::optional<Halfspace>& keep) {
  if (!(level > 0)) throw GeometryError("sublevel_volume: level must be positive");
  std::size_t count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v.mask[i] || !(v.values[i] < level)) continue;
    if (keep && keep->value(v.grid.point(i)) > 0) continue;
    ++count;
  }
  return static_cast<double>(count) * v.grid.cell_volume();
}

// ---------------------------------------------------------------- distances

namespace {

// Squared distance transform along one line (Felzenszwalb-Huttenlocher lower envelope).
void edt_line(std::vector<double>& f, double h, std::vector<double>& d, std::vector<int>& v,
              std::vector<double>& z) {
  const int m = static_cast<int>(f.size());
  const double inf = std::numeric_limits<double>::infinity();
  int first = -1;
  for (int q = 0; q < m; ++q)
    if (f[q] < inf) {
      first = q;
      break;
    }
  if (first < 0) return;
  const double h2 = h * h;
  auto meet = [&](int q, int p) {
    return ((f[q] + h2 * q * q) - (f[p] + h2 * static_cast<double>(p) * p)) / (2.0 * h2 * (q - p));
  };
  int k = 0;
  v[0] = first;
  z[0] = -inf;
  z[1] = inf;
  for (int q = first + 1; q < m; ++q) {
    if (!(f[q] < inf)) continue;
    double s = meet(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = meet(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < m; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = (q - v[k]) * h;
    d[q] = dq * dq + f[v[k]];
  }
  f.swap(d);
}

}  // namespace

std::vector<double> distance_transform(const Grid& grid, const std::vector<std::uint8_t>& seed) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> f(grid.node_count(), inf);
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (seed[i]) f[i] = 0.0, any = true;
  if (!any) return f;
  const int n = grid.dim();
  std::vector<int> ijk(n);
  for (int a = 0; a < n; ++a) {
    const int m = grid.nodes(a);
    std::vector<double> line(m), d(m), z(m + 1);
    std::vector<int> v(m);
    const std::size_t st = grid.stride(a);
    for (std::size_t start = 0; start < grid.node_count(); ++start) {
      grid.unravel(start, ijk);
      if (ijk[a] != 0) continue;
      for (int q = 0; q < m; ++q) line[q] = f[start + q * st];
      edt_line(line, grid.h()[a], d, v, z);
      for (int q = 0; q < m; ++q) f[start + q * st] = line[q];
    }
  }
  for (auto& x : f) x = std::sqrt(x);
  return f;
}

double hausdorff_distance(const CellSet& a, const CellSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  if (!(a.grid == b.grid)) throw GeometryError("hausdorff_distance: cell sets on different grids");
  auto one_sided = [](const CellSet& from, const CellSet& to) {
    std::vector<std::uint8_t> seed(to.grid.node_count(), 0);
    for (auto m : to.members) seed[m] = 1;
    const auto dist = distance_transform(to.grid, seed);
    double h = 0.0;
    for (auto m : from.members) h = std::max(h, dist[m]);
    return h;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace maob
