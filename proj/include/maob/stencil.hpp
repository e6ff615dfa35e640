#pragma once

#include "maob/geometry.hpp"

#include <functional>
#include <vector>

namespace maob {

/// Lattice directions of infinity-norm <= width (one per +-pair, primitive)
/// grouped into orthogonal n-frames. The coordinate frame is always frame 0.
struct StencilSet {
  int dim = 0;
  int width = 0;
  std::vector<std::vector<int>> directions;
  std::vector<std::vector<int>> frames;  // indices into `directions`

  static StencilSet make(int n, int width);
  /// 2 in two dimensions, 1 otherwise.
  static int default_width(int n);
  /// Width growing like h^{-1/2}: round(sqrt(cells / 8)) clamped to [1, 4] in
  /// two dimensions and [1, 2] above (frame counts explode past that).
  static int width_for(int n, int cells);
};

/// One arm of a second difference: a grid node, or a point on the domain
/// boundary (node < 0) carrying its Dirichlet value.
struct Arm {
  std::int64_t node = -1;
  double length = 0;
  double value = 0;
};

/// Arm tables of a stencil on a masked grid. Arms that would leave the
/// domain are cut at the boundary and carry the Dirichlet value there.
class Discretization {
 public:
  Discretization(GridMask gm, const ConvexDomain& domain, StencilSet stencil,
                 std::function<double(const Vec&)> dirichlet);

  const GridMask& mask() const { return gm_; }
  const Grid& grid() const { return gm_.grid; }
  const StencilSet& stencil() const { return st_; }
  int direction_count() const { return static_cast<int>(st_.directions.size()); }

  /// Nodes carrying Dirichlet data (the boundary layer) are not unknowns.
  bool is_unknown(std::size_t node) const { return gm_.inside[node] && !gm_.boundary[node]; }
  const std::vector<std::size_t>& unknowns() const { return unknowns_; }

  /// Forward (+e) and backward (-e) arms of direction `dir` at an unknown node.
  void arms(std::size_t node, int dir, Arm& plus, Arm& minus) const;

  /// Centred (possibly non-uniform) second difference of v along direction dir.
  double second_difference(const std::vector<double>& v, std::size_t node, int dir) const;

  /// Dirichlet data at a point.
  double dirichlet(const Vec& x) const { return phi_(x); }

 private:
  GridMask gm_;
  StencilSet st_;
  std::function<double(const Vec&)> phi_;
  std::vector<std::size_t> unknowns_;
  std::vector<std::int64_t> offset_;   // per direction: signed node offset
  std::vector<double> step_;           // per direction: Euclidean step length
  std::vector<std::int32_t> special_;  // per node: index into cut_ or -1
  std::vector<Arm> cut_;               // 2 * directions arms per special node
};

/// MA_h[v](node) = min over frames of prod_i max(Delta_{e_i} v, 0).
double ma_operator(const Discretization& d, const std::vector<double>& v, std::size_t node);
double ma_operator(const Discretization& d, const ScalarField& v, std::size_t node);

}  // namespace maob
