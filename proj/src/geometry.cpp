// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include "minmom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace minmom {

namespace {
constexpr double kDomainTol = 1e-12;
}

Partition1D::Partition1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("partition needs at least 2 nodes");
  if (nodes_.front() != -1.0 || nodes_.back() != 1.0)
    throw std::invalid_argument("partition must span [-1,1] exactly");
  for (std::size_t j = 0; j + 1 < nodes_.size(); ++j)
    if (!(nodes_[j] < nodes_[j + 1]))
      throw std::invalid_argument("partition nodes must be strictly increasing");
}

Partition1D Partition1D::equidistant(int k) {
  if (k < 1) throw std::invalid_argument("equidistant partition needs k >= 1");
  std::vector<double> nodes(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) nodes[static_cast<std::size_t>(j)] = -1.0 + 2.0 * j / k;
  nodes.front() = -1.0;
  nodes.back() = 1.0;
  return Partition1D(std::move(nodes));
}

int Partition1D::locate(double mu) const {
  if (std::abs(mu) > 1.0 + kDomainTol)
    throw std::invalid_argument("point outside [-1,1]: mu=" + std::to_string(mu));
  mu = std::clamp(mu, -1.0, 1.0);
  // Lowest-index closed interval containing mu.
  for (int j = 0; j < intervals(); ++j)
    if (mu <= right(j)) return j;
  return intervals() - 1;
}

Vec3 project_to_sphere(const Vec3& x) {
  const double norm = x.norm();
  if (norm == 0.0) throw std::invalid_argument("cannot project the zero vector");
  return x / norm;
}

double spherical_triangle_area(const SphericalTriangle& tri) {
  // Solid angle from the Van Oosterom-Strackee identity.
  const double numer = std::abs(tri.a.dot(tri.b.cross(tri.c)));
  const double denom = 1.0 + tri.a.dot(tri.b) + tri.b.dot(tri.c) + tri.c.dot(tri.a);
  return 2.0 * std::atan2(numer, denom);
}

Vec3 spherical_triangle_first_moment(const SphericalTriangle& tri) {
  // Stokes: integral of Omega over the patch equals half the sum over the
  // boundary arcs of (arc angle) times the arc's great-circle normal.
  auto edge_term = [](const Vec3& p, const Vec3& q) -> Vec3 {
    const Vec3 cross = p.cross(q);
    const double s = cross.norm();
    if (s == 0.0) return Vec3::Zero();
    const double angle = std::atan2(s, p.dot(q));
    return (angle / s) * cross;
  };
  return 0.5 * (edge_term(tri.a, tri.b) + edge_term(tri.b, tri.c) + edge_term(tri.c, tri.a));
}

bool in_spherical_triangle(const SphericalTriangle& tri, const Vec3& omega, double tol) {
  return tri.a.cross(tri.b).dot(omega) >= -tol && tri.b.cross(tri.c).dot(omega) >= -tol &&
         tri.c.cross(tri.a).dot(omega) >= -tol;
}

std::array<double, 3> spherical_barycentric(const SphericalTriangle& tri, const Vec3& omega) {
  if (!in_spherical_triangle(tri, omega))
    throw std::invalid_argument("point is outside the spherical triangle");
  // Intersect the ray through omega with the plane of the flat triangle and
  // take planar barycentric coordinates there. On a shared edge the third
  // vertex drops out, so adjacent triangles agree.
  Eigen::Matrix3d m;
  m.col(0) = tri.a;
  m.col(1) = tri.b;
  m.col(2) = tri.c;
  Vec3 lambda = m.fullPivLu().solve(omega);
  const double sum = lambda.sum();
  if (!(sum > 0.0)) throw std::invalid_argument("degenerate spherical triangle");
  lambda /= sum;
  std::array<double, 3> out{lambda[0], lambda[1], lambda[2]};
  for (double& v : out) v = std::max(v, 0.0);
  const double renorm = out[0] + out[1] + out[2];
  for (double& v : out) v /= renorm;
  return out;
}

bool in_spherical_hull(const SphericalTriangle& tri, const Vec3& p, bool strict) {
  constexpr double slack = 1e-12;
  const double tol = strict ? -slack : slack;

  // Inside the vertex cone (equivalently: the radial projection lies in the
  // spherical triangle).
  const bool in_cone = tri.a.cross(tri.b).dot(p) >= -tol && tri.b.cross(tri.c).dot(p) >= -tol &&
                       tri.c.cross(tri.a).dot(p) >= -tol;
  if (!in_cone) return false;

  // Inside the unit ball.
  if (!(p.norm() <= 1.0 + tol)) return false;

  // Above the plane of the flat triangle (normal oriented away from origin).
  Vec3 n = (tri.b - tri.a).cross(tri.c - tri.a);
  if (n.dot(tri.a) < 0.0) n = -n;
  n.normalize();
  return n.dot(p) >= n.dot(tri.a) - tol;
}

SphericalTriangulation::SphericalTriangulation(std::vector<Vec3> vertices,
                                               std::vector<std::array<int, 3>> triangles,
                                               int level)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), level_(level) {
  build_vertex_adjacency();
}

void SphericalTriangulation::build_vertex_adjacency() {
  vertex_triangles_.assign(vertices_.size(), {});
  for (int t = 0; t < triangle_count(); ++t)
    for (int v : triangles_[static_cast<std::size_t>(t)])
      vertex_triangles_[static_cast<std::size_t>(v)].push_back(t);
}

SphericalTriangulation SphericalTriangulation::octants() {
  const std::vector<Vec3> vertices = {Vec3(1, 0, 0),  Vec3(0, 1, 0),  Vec3(0, 0, 1),
                                      Vec3(-1, 0, 0), Vec3(0, -1, 0), Vec3(0, 0, -1)};
  // One triangle per octant, each oriented with det[a,b,c] > 0.
  const std::vector<std::array<int, 3>> triangles = {
      {0, 1, 2}, {1, 3, 2}, {3, 4, 2}, {4, 0, 2},
      {1, 0, 5}, {3, 1, 5}, {4, 3, 5}, {0, 4, 5},
  };
  return SphericalTriangulation(vertices, triangles, 0);
}

SphericalTriangulation SphericalTriangulation::refined_octants(int r) {
  if (r < 0) throw std::invalid_argument("refinement level must be >= 0");
  SphericalTriangulation mesh = octants();
  for (int i = 0; i < r; ++i) mesh = mesh.refined();
  return mesh;
}

SphericalTriangulation SphericalTriangulation::refined() const {
  std::vector<Vec3> vertices = vertices_;
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(triangles_.size() * 4);

  // Midpoints are shared per undirected edge so the refined mesh conforms.
  std::map<std::pair<int, int>, int> edge_midpoint;
  auto midpoint = [&](int i, int j) {
    const auto key = std::minmax(i, j);
    auto it = edge_midpoint.find(key);
    if (it != edge_midpoint.end()) return it->second;
    const Vec3 m = project_to_sphere(vertices_[static_cast<std::size_t>(i)] +
                                     vertices_[static_cast<std::size_t>(j)]);
    const int idx = static_cast<int>(vertices.size());
    vertices.push_back(m);
    edge_midpoint.emplace(key, idx);
    return idx;
  };

  for (const auto& tri : triangles_) {
    const int ia = tri[0], ib = tri[1], ic = tri[2];
    const int mab = midpoint(ia, ib);
    const int mbc = midpoint(ib, ic);
    const int mca = midpoint(ic, ia);
    // Children of triangle t occupy indices 4t..4t+3.
    triangles.push_back({ia, mab, mca});
    triangles.push_back({mab, ib, mbc});
    triangles.push_back({mca, mbc, ic});
    triangles.push_back({mab, mbc, mca});
  }
  return SphericalTriangulation(std::move(vertices), std::move(triangles), level_ + 1);
}

SphericalTriangle SphericalTriangulation::triangle(int t) const {
  const auto& idx = triangles_[static_cast<std::size_t>(t)];
  return {vertices_[static_cast<std::size_t>(idx[0])], vertices_[static_cast<std::size_t>(idx[1])],
          vertices_[static_cast<std::size_t>(idx[2])]};
}

const std::vector<int>& SphericalTriangulation::triangles_at_vertex(int v) const {
  return vertex_triangles_[static_cast<std::size_t>(v)];
}

int SphericalTriangulation::locate(const Vec3& omega) const {
  if (std::abs(omega.norm() - 1.0) > kDomainTol)
    throw std::invalid_argument("locate expects a unit direction vector");
  for (int t = 0; t < triangle_count(); ++t)
    if (in_spherical_triangle(triangle(t), omega, 1e-13)) return t;
  // Round-off can push a point just outside every side test; retry coarser.
  for (int t = 0; t < triangle_count(); ++t)
    if (in_spherical_triangle(triangle(t), omega, 1e-10)) return t;
  throw std::runtime_error("no containing triangle found");
}

double SphericalTriangulation::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < triangle_count(); ++t) sum += spherical_triangle_area(triangle(t));
  return sum;
}

void SphericalTriangulation::write(std::ostream& os) const {
  os.precision(17);
  os << "vertices " << vertex_count() << " triangles " << triangle_count() << " level " << level_
     << "\n";
  for (const Vec3& v : vertices_) os << v[0] << " " << v[1] << " " << v[2] << "\n";
  for (const auto& t : triangles_) os << t[0] << " " << t[1] << " " << t[2] << "\n";
}

SphericalTriangulation SphericalTriangulation::read(std::istream& is) {
  std::string kw_vertices, kw_triangles, kw_level;
  int nv = 0, nt = 0, level = 0;
  is >> kw_vertices >> nv >> kw_triangles >> nt >> kw_level >> level;
  if (!is || kw_vertices != "vertices" || kw_triangles != "triangles" || kw_level != "level")
    throw std::runtime_error("malformed triangulation header");
  std::vector<Vec3> vertices(static_cast<std::size_t>(nv));
  for (auto& v : vertices) is >> v[0] >> v[1] >> v[2];
  std::vector<std::array<int, 3>> triangles(static_cast<std::size_t>(nt));
  for (auto& t : triangles) is >> t[0] >> t[1] >> t[2];
  if (!is) throw std::runtime_error("malformed triangulation body");
  return SphericalTriangulation(std::move(vertices), std::move(triangles), level);
}

}  // namespace minmom
