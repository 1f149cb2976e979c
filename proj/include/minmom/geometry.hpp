// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace minmom {

using Vec3 = Eigen::Vector3d;

/// Partition of the direction-cosine interval [-1,1] into k intervals.
/// Nodes are strictly increasing with the first node exactly -1 and the
/// last exactly 1. Immutable after construction.
class Partition1D {
 public:
  explicit Partition1D(std::vector<double> nodes);

  /// Equidistant partition with k >= 1 intervals.
  static Partition1D equidistant(int k);

  int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  double node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& nodes() const { return nodes_; }
  double left(int j) const { return nodes_[static_cast<std::size_t>(j)]; }
  double right(int j) const { return nodes_[static_cast<std::size_t>(j) + 1]; }
  double length(int j) const { return right(j) - left(j); }

  /// Index of the closed interval containing mu. Shared nodes resolve to the
  /// lowest-index containing interval. Throws for |mu| > 1 (beyond 1e-12).
  int locate(double mu) const;

  bool operator==(const Partition1D& other) const { return nodes_ == other.nodes_; }

 private:
  std::vector<double> nodes_;
};

/// A spherical triangle given by three unit vertices (counterclockwise when
/// seen from outside the sphere).
struct SphericalTriangle {
  Vec3 a, b, c;
};

/// Radial projection x -> x/|x|. Throws on the zero vector.
Vec3 project_to_sphere(const Vec3& x);

/// Solid angle subtended by the spherical triangle.
double spherical_triangle_area(const SphericalTriangle& tri);

/// Component-wise integral of Omega over the spherical triangle, evaluated
/// from the closed line-integral form along the great-circle boundary.
Vec3 spherical_triangle_first_moment(const SphericalTriangle& tri);

/// True if the unit vector omega lies in the closed spherical triangle
/// (within tol on the three great-circle side tests).
bool in_spherical_triangle(const SphericalTriangle& tri, const Vec3& omega,
                           double tol = 1e-12);

/// Barycentric coordinates of a point of the spherical triangle, computed
/// from the ray-plane intersection with the flat triangle spanned by the
/// vertices. Partition of unity, Lagrange property at the vertices, and
/// non-negativity hold; values on a shared edge depend only on the two edge
/// vertices. Throws if omega is outside the closed triangle.
std::array<double, 3> spherical_barycentric(const SphericalTriangle& tri,
                                            const Vec3& omega);

/// Membership in the convex hull of the spherical triangle. The hull is the
/// intersection of the vertex cone, the unit ball, and the half-space above
/// the flat-triangle plane; `strict` requires all three conditions strictly.
bool in_spherical_hull(const SphericalTriangle& tri, const Vec3& p, bool strict);

/// Triangulation of the unit sphere obtained by dyadic refinement of the
/// eight octant triangles. After r refinements there are 2*4^(r+1) triangles
/// and 4^(r+1) + 2 vertices. Triangle t of a refined mesh has its four
/// children at indices 4t..4t+3 of the next level, so ancestors follow from
/// integer division. Immutable after construction.
class SphericalTriangulation {
 public:
  /// The eight octant triangles (refinement level 0).
  static SphericalTriangulation octants();

  /// r dyadic refinements of the octants.
  static SphericalTriangulation refined_octants(int r);

  /// One dyadic refinement: every triangle is split into four, new vertices
  /// at the radially projected edge midpoints, deduplicated per edge.
  SphericalTriangulation refined() const;

  int level() const { return level_; }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const Vec3& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const std::array<int, 3>& triangle_vertices(int t) const {
    return triangles_[static_cast<std::size_t>(t)];
  }
  SphericalTriangle triangle(int t) const;
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

  /// Triangles incident to a vertex, in increasing index order.
  const std::vector<int>& triangles_at_vertex(int v) const;

  /// Index of the closed spherical triangle containing the unit vector.
  /// Ties on shared edges resolve to the lowest triangle index. Throws if
  /// |omega| deviates from 1 by more than 1e-12.
  int locate(const Vec3& omega) const;

  double total_area() const;

  /// Plain-text serialization: "vertices N triangles M level r" header, then
  /// N vertex lines "x y z", then M triangle lines "ia ib ic".
  void write(std::ostream& os) const;
  static SphericalTriangulation read(std::istream& is);

 private:
  SphericalTriangulation(std::vector<Vec3> vertices,
                         std::vector<std::array<int, 3>> triangles, int level);
  void build_vertex_adjacency();

  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::vector<int>> vertex_triangles_;
  int level_ = 0;
};

}  // namespace minmom
