#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace maob {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform Cartesian grid. `res` counts cells per axis, so axis i carries
/// res[i] + 1 nodes. Node storage is row-major: the last axis varies fastest.
class Grid {
 public:
  Grid() = default;
  Grid(std::vector<double> lo, std::vector<double> hi, std::vector<int> res);

  int dim() const { return static_cast<int>(lo_.size()); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  const std::vector<int>& res() const { return res_; }
  const std::vector<double>& h() const { return h_; }
  double max_h() const;
  double min_h() const;
  double cell_volume() const;

  int nodes(int axis) const { return res_[axis] + 1; }
  std::size_t node_count() const { return count_; }
  std::size_t stride(int axis) const { return stride_[axis]; }

  std::size_t index(std::span<const int> ijk) const;
  void unravel(std::size_t idx, std::span<int> ijk) const;
  Vec point(std::size_t idx) const;
  double coord(int axis, int i) const { return lo_[axis] + i * h_[axis]; }

  bool operator==(const Grid& o) const;

 private:
  std::vector<double> lo_, hi_;
  std::vector<int> res_;
  std::vector<double> h_;
  std::vector<std::size_t> stride_;
  std::size_t count_ = 0;
};

/// {x : normal . x <= offset}. `value` is the affine function l(x) = normal . x - offset.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  double value(const Vec& x) const { return normal.dot(x) - offset; }
  /// Signed Euclidean distance to the bounding hyperplane (positive outside).
  double signed_distance(const Vec& x) const { return value(x) / normal.norm(); }
};

struct Ball {
  Vec center;
  double radius = 1.0;
};

struct Box {
  Vec lo, hi;
};

struct Polytope {
  std::vector<Halfspace> faces;
};

struct Hull {
  std::vector<Vec> points;
};

/// Bounded convex set. Hulls are converted to an equivalent halfspace list on
/// construction (n <= 3).
class ConvexDomain {
 public:
  using Shape = std::variant<Ball, Box, Polytope, Hull>;

  explicit ConvexDomain(Shape shape);

  static ConvexDomain ball(Vec center, double radius) { return ConvexDomain(Ball{std::move(center), radius}); }
  static ConvexDomain box(Vec lo, Vec hi) { return ConvexDomain(Box{std::move(lo), std::move(hi)}); }
  static ConvexDomain polytope(std::vector<Halfspace> faces) { return ConvexDomain(Polytope{std::move(faces)}); }
  static ConvexDomain hull(std::vector<Vec> points) { return ConvexDomain(Hull{std::move(points)}); }

  const Shape& shape() const { return shape_; }
  int dim() const { return dim_; }

  bool contains(const Vec& x, double tol = 0.0) const;
  /// Distance from x to the boundary, positive inside and negative outside.
  /// Exact for balls and boxes; for polytopes the facet-plane distance, which is
  /// exact inside.
  double boundary_distance(const Vec& x) const;
  /// Largest t >= 0 with x + t*dir inside the closed domain (x assumed inside).
  double exit_length(const Vec& x, const Vec& dir) const;

  Vec bbox_lo() const { return bbox_lo_; }
  Vec bbox_hi() const { return bbox_hi_; }
  double diameter() const { return (bbox_hi_ - bbox_lo_).norm(); }

  /// Halfspace description (empty for balls).
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  /// Vertices of polytope-like domains (boxes, polytopes, hulls).
  const std::vector<Vec>& vertices() const { return vertices_; }

  std::string describe() const;

 private:
  Shape shape_;
  int dim_ = 0;
  std::vector<Halfspace> halfspaces_;
  std::vector<Vec> vertices_;
  Vec bbox_lo_, bbox_hi_;
};

/// Vertices of {a_i . x <= b_i} by brute-force intersection of n planes.
std::vector<Vec> polytope_vertices(const std::vector<Halfspace>& faces, int dim, double tol = 1e-10);
/// Facet halfspaces of the convex hull of a point set (n = 1, 2, 3).
std::vector<Halfspace> hull_halfspaces(const std::vector<Vec>& points);

/// Grid plus the inside-domain mask and the boundary layer (mask nodes with a
/// face neighbour outside the mask, or on the grid edge).
struct GridMask {
  Grid grid;
  std::vector<std::uint8_t> inside;
  std::vector<std::uint8_t> boundary;

  std::size_t inside_count() const;
};

/// Tight bounding-box grid over the domain with `res` cells per axis.
GridMask make_grid(const ConvexDomain& domain, std::span<const int> res);
GridMask make_grid(const ConvexDomain& domain, int res);
/// Mask of an explicit grid against a domain.
GridMask mask_grid(const Grid& grid, const ConvexDomain& domain);

/// Node samples over a grid with an inside mask. Values outside the mask are
/// NaN by convention.
struct ScalarField {
  Grid grid;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  ScalarField() = default;
  ScalarField(Grid g, std::vector<std::uint8_t> m, double fill = 0.0);

  std::size_t size() const { return values.size(); }
  bool inside(std::size_t i) const { return mask[i] != 0; }
  double max_value() const;
  double min_value() const;
  /// Multilinear interpolation; cells with masked-out corners fall back to
  /// the nearest inside corner.
  double interpolate(const Vec& x) const;
};

/// Affine subspace point + span(basis columns), basis orthonormal.
struct AffineSubspace {
  Vec point;
  Mat basis;  // n x k

  /// Orthonormalises the given spanning vectors (columns); rank-deficient
  /// columns are dropped.
  static AffineSubspace from_span(Vec point, const Mat& spanning, double tol = 1e-12);
  int dim() const { return static_cast<int>(basis.cols()); }
  Vec project(const Vec& x) const;
};

double dist_to_subspace(const Vec& x, const AffineSubspace& s);

/// A set of grid nodes, each standing for its dual cell (the box of side h
/// centred at the node). Members are sorted and unique.
struct CellSet {
  Grid grid;
  std::vector<std::size_t> members;

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
  bool contains(std::size_t node) const;
  Vec center(std::size_t k) const { return grid.point(members[k]); }
  double volume() const { return static_cast<double>(members.size()) * grid.cell_volume(); }
  /// Number of grid cells whose 2^n corner nodes are all members.
  std::size_t full_cells() const;
};

/// Cell-counting measure of {v < level} inside the mask, optionally
/// intersected with the halfspace `keep`. Each counted node contributes the
/// volume of one grid cell.
double sublevel_volume(const ScalarField& v, double level,
                       const std::optional<Halfspace>& keep = std::nullopt);

/// Symmetric Hausdorff distance of cell-centre sets. Exactly one empty set
/// gives +infinity; both empty gives 0.
double hausdorff_distance(const CellSet& a, const CellSet& b);

/// Euclidean distance from every grid node to the nearest node flagged in
/// `seed` (exact separable distance transform). Infinity when seed is empty.
std::vector<double> distance_transform(const Grid& grid, const std::vector<std::uint8_t>& seed);

}  // namespace maob
