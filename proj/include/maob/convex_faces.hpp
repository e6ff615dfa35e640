#pragma once

#include "maob/geometry.hpp"

#include <vector>

namespace maob {

enum class FaceKind {
  strictly_convex,      // exposed point (up to resolution) or a face not reaching the boundary
  non_strictly_convex,  // flat face of dimension >= 1 whose extreme points lie on the domain boundary
};

const char* to_string(FaceKind k);

struct Face {
  std::vector<std::size_t> nodes;  // grid node indices, sorted
  Vec normal;                      // outward unit normal of the supporting hyperplane
  int affine_dim = 0;
  bool extremes_on_boundary = false;
  /// Every node lies within the boundary tolerance of the domain boundary, so
  /// the face is part of the domain boundary rather than the free boundary.
  bool on_domain_boundary = false;
  FaceKind kind = FaceKind::strictly_convex;
};

struct FaceOptions {
  double tol_face = 0.0;      // <= 0 selects 1.5 * max(h)
  double tol_boundary = 0.0;  // <= 0 selects 1.5 * max(h)
  int directions = 0;         // sampled support directions; <= 0 selects a default per dimension
};

struct FaceDecomposition {
  Grid grid;
  std::vector<Face> faces;
  /// Nodes within tol_face of at least one sampled supporting hyperplane.
  std::vector<std::size_t> hull_boundary;
  double tol_face = 0.0;
  double tol_boundary = 0.0;
  std::size_t full_cells = 0;
  /// Dichotomy flag: more than 2^n full grid cells inside the set.
  bool positive_measure = false;

  std::vector<const Face*> non_strictly_convex() const;
  /// Union of the nodes of all non-strictly-convex faces.
  std::vector<std::size_t> nsc_nodes() const;
};

/// Count of principal directions of `points` along which the set is flat:
/// extended beyond 2 * tol and touching the supporting hyperplane (depth
/// below tol / 4) near both ends. Curved caps collected by a tolerance band
/// are extended but bend away from the hyperplane, so they do not count.
int flat_rank(const std::vector<Vec>& points, const Vec& normal, double tol,
              std::vector<Vec>* flat_axes = nullptr);

/// Exposed faces of the node set K, found by sampling supporting hyperplanes.
/// Throws GeometryError("no coincidence set") when K is empty.
FaceDecomposition exposed_faces(const CellSet& K, const ConvexDomain& domain, FaceOptions opts = {});

/// Median local principal rank of a node set (neighbourhoods of radius
/// `radius`); the manifold dimension of a discretised surface.
int local_dimension(const Grid& grid, const std::vector<std::size_t>& nodes, double radius);

}  // namespace maob
