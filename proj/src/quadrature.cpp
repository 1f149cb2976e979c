// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include "minmom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace minmom {

namespace {

// Nodes/weights from the symmetric tridiagonal Jacobi matrix of a monic
// orthogonal-polynomial recurrence (Golub-Welsch). mu0 is the total mass of
// the weight function.
GaussRule golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta,
                       double mu0) {
  const int n = static_cast<int>(alpha.size());
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      const double b = std::sqrt(beta[static_cast<std::size_t>(i + 1)]);
      jacobi(i, i + 1) = b;
      jacobi(i + 1, i) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = eig.eigenvalues()[i];
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

double legendre_value(int n, double x) {
  double pm1 = 1.0, p = x;
  if (n == 0) return 1.0;
  for (int l = 1; l < n; ++l) {
    const double pn = ((2.0 * l + 1.0) * x * p - l * pm1) / (l + 1.0);
    pm1 = p;
    p = pn;
  }
  return p;
}

// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1,1].
GaussRule gauss_jacobi(int n, double a, double b) {
  std::vector<double> alpha(static_cast<std::size_t>(n));
  std::vector<double> beta(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    alpha[static_cast<std::size_t>(k)] =
        (k == 0 && a + b == 0.0) ? 0.0 : (b * b - a * a) / (s * (s + 2.0));
    if (k > 0) {
      beta[static_cast<std::size_t>(k)] =
          4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
  }
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);
  return golub_welsch(alpha, beta, mu0);
}

Rule1D::Element mapped_lobatto(const GaussRule& base, int parent, double lo, double hi) {
  if (hi - lo < 1e-14) throw std::invalid_argument("degenerate quadrature interval");
  Rule1D::Element e;
  e.parent = parent;
  e.lo = lo;
  e.hi = hi;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  e.nodes.reserve(base.nodes.size());
  e.weights.reserve(base.nodes.size());
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    e.nodes.push_back(mid + half * base.nodes[i]);
    e.weights.push_back(half * base.weights[i]);
  }
  // Pin the endpoints so interval boundaries are exact node values.
  e.nodes.front() = lo;
  e.nodes.back() = hi;
  return e;
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  return gauss_jacobi(n, 0.0, 0.0);
}

GaussRule gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto needs n >= 2");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  // Interior nodes are the Gauss-Jacobi(1,1) points; endpoint and interior
  // weights follow the classical closed forms.
  const double endpoint_weight = 2.0 / (n * (n - 1.0));
  rule.nodes.front() = -1.0;
  rule.nodes.back() = 1.0;
  rule.weights.front() = endpoint_weight;
  rule.weights.back() = endpoint_weight;
  if (n > 2) {
    const GaussRule interior = gauss_jacobi(n - 2, 1.0, 1.0);
    for (int i = 0; i < n - 2; ++i) {
      const double x = interior.nodes[static_cast<std::size_t>(i)];
      const double p = legendre_value(n - 1, x);
      rule.nodes[static_cast<std::size_t>(i + 1)] = x;
      rule.weights[static_cast<std::size_t>(i + 1)] = 2.0 / (n * (n - 1.0) * p * p);
    }
  }
  return rule;
}

std::size_t Rule1D::node_count() const {
  std::size_t count = 0;
  for (const auto& e : elements) count += e.nodes.size();
  return count;
}

double Rule1D::weight_sum() const {
  double sum = 0.0;
  for (const auto& e : elements)
    for (double w : e.weights) sum += w;
  return sum;
}

bool Rule1D::includes_partition_nodes(const Partition1D& partition) const {
  auto has_node = [&](int parent, double value) {
    for (const auto& e : elements) {
      if (e.parent != parent) continue;
      for (double x : e.nodes)
        if (std::abs(x - value) <= 1e-14) return true;
    }
    return false;
  };
  for (int j = 0; j < partition.intervals(); ++j)
    if (!has_node(j, partition.left(j)) || !has_node(j, partition.right(j))) return false;
  return true;
}

Rule1D composite_lobatto(const Partition1D& partition, int points_per_interval) {
  const GaussRule base = gauss_lobatto(points_per_interval);
  Rule1D rule;
  rule.elements.reserve(static_cast<std::size_t>(partition.intervals()));
  for (int j = 0; j < partition.intervals(); ++j)
    rule.elements.push_back(mapped_lobatto(base, j, partition.left(j), partition.right(j)));
  return rule;
}

Rule1D fine_rule(const Partition1D& partition, int min_subintervals, int points,
                 const std::vector<double>& breakpoints) {
  const GaussRule base = gauss_lobatto(points);
  const int k = partition.intervals();
  const int per_interval = std::max(1, (min_subintervals + k - 1) / k);
  Rule1D rule;
  for (int j = 0; j < k; ++j) {
    const double lo = partition.left(j), hi = partition.right(j);
    // Split points: uniform subdivision plus any breakpoints strictly inside.
    std::vector<double> cuts = {lo};
    for (int s = 1; s < per_interval; ++s) cuts.push_back(lo + (hi - lo) * s / per_interval);
    for (double b : breakpoints)
      if (b > lo + 1e-14 && b < hi - 1e-14) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      if (cuts[s + 1] - cuts[s] < 1e-14) continue;
      rule.elements.push_back(mapped_lobatto(base, j, cuts[s], cuts[s + 1]));
    }
  }
  return rule;
}

TriangleRule flat_triangle_rule(int degree) {
  if (degree < 1) throw std::invalid_argument("triangle rule needs degree >= 1");
  // Collapsed tensor rule on the reference triangle: the s-direction carries
  // the (1-s) area Jacobian as a Gauss-Jacobi weight, the t-direction is
  // plain Gauss-Legendre. Exact through the requested total degree.
  const int ns = (degree + 2) / 2;
  const int nt = (degree + 2) / 2;
  const GaussRule js = gauss_jacobi(ns, 1.0, 0.0);
  const GaussRule gt = gauss_legendre(nt);

  std::vector<std::array<double, 3>> bary;
  std::vector<double> frac;
  for (int i = 0; i < ns; ++i) {
    const double s = 0.5 * (1.0 + js.nodes[static_cast<std::size_t>(i)]);
    const double ws = js.weights[static_cast<std::size_t>(i)] / 4.0;  // mass 1/2 on [0,1]
    for (int j = 0; j < nt; ++j) {
      const double t = 0.5 * (1.0 + gt.nodes[static_cast<std::size_t>(j)]);
      const double wt = gt.weights[static_cast<std::size_t>(j)] / 2.0;  // mass 1 on [0,1]
      bary.push_back({(1.0 - s) * (1.0 - t), s, t * (1.0 - s)});
      frac.push_back(2.0 * ws * wt);  // normalized by the reference area 1/2
    }
  }

  // Average over the three vertex rotations to make the rule symmetric.
  TriangleRule rule;
  for (std::size_t i = 0; i < bary.size(); ++i) {
    const auto& l = bary[i];
    rule.barycentric.push_back({l[0], l[1], l[2]});
    rule.barycentric.push_back({l[2], l[0], l[1]});
    rule.barycentric.push_back({l[1], l[2], l[0]});
    for (int rep = 0; rep < 3; ++rep) rule.fractions.push_back(frac[i] / 3.0);
  }
  return rule;
}

std::size_t SphereRule::node_count() const {
  std::size_t count = 0;
  for (const auto& e : elements) count += e.nodes.size();
  return count;
}

double SphereRule::weight_sum() const {
  double sum = 0.0;
  for (const auto& e : elements)
    for (double w : e.weights) sum += w;
  return sum;
}

namespace {

SphereRule::Element project_triangle_rule(const TriangleRule& flat, const SphericalTriangle& tri,
                                          int parent) {
  Vec3 normal = (tri.b - tri.a).cross(tri.c - tri.a);
  const double doubled_area = normal.norm();
  if (doubled_area < 1e-14) throw std::invalid_argument("flat triangle is degenerate");
  if (normal.dot(tri.a) < 0.0) normal = -normal;
  normal /= doubled_area;
  const double area = 0.5 * doubled_area;

  SphereRule::Element e;
  e.parent = parent;
  e.nodes.reserve(flat.barycentric.size());
  e.weights.reserve(flat.barycentric.size());
  for (std::size_t i = 0; i < flat.barycentric.size(); ++i) {
    const auto& l = flat.barycentric[i];
    const Vec3 x = l[0] * tri.a + l[1] * tri.b + l[2] * tri.c;
    const double r = x.norm();
    // Solid-angle measure of the radial projection: (x.n) dA / |x|^3.
    e.nodes.push_back(x / r);
    e.weights.push_back(flat.fractions[i] * area * x.dot(normal) / (r * r * r));
  }
  return e;
}

}  // namespace

SphereRule::Element spherical_triangle_rule(const SphericalTriangle& tri, int degree) {
  return project_triangle_rule(flat_triangle_rule(degree), tri, 0);
}

SphereRule mesh_rule(const SphericalTriangulation& mesh, int degree) {
  const TriangleRule flat = flat_triangle_rule(degree);
  SphereRule rule;
  rule.elements.reserve(static_cast<std::size_t>(mesh.triangle_count()));
  for (int t = 0; t < mesh.triangle_count(); ++t)
    rule.elements.push_back(project_triangle_rule(flat, mesh.triangle(t), t));
  return rule;
}

SphereRule mesh_rule_subdivided(const SphericalTriangulation& mesh, int extra_levels, int degree) {
  if (extra_levels <= 0) return mesh_rule(mesh, degree);
  SphericalTriangulation fine = mesh;
  for (int i = 0; i < extra_levels; ++i) fine = fine.refined();
  const TriangleRule flat = flat_triangle_rule(degree);
  const int descendants = 1 << (2 * extra_levels);  // 4^extra_levels
  SphereRule rule;
  rule.elements.reserve(static_cast<std::size_t>(fine.triangle_count()));
  for (int t = 0; t < fine.triangle_count(); ++t)
    rule.elements.push_back(project_triangle_rule(flat, fine.triangle(t), t / descendants));
  return rule;
}

}  // namespace minmom
