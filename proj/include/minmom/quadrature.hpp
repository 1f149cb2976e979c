// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "minmom/geometry.hpp"

namespace minmom {

/// Nodes and weights of a one-dimensional rule on [-1,1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points (exact through degree 2n-1).
GaussRule gauss_legendre(int n);

/// Gauss-Lobatto rule with n >= 2 points. Includes both endpoints and is
/// exact through degree 2n-3.
GaussRule gauss_lobatto(int n);

/// Composite rule on a partition of [-1,1]. Each element records the model
/// interval it integrates (`parent`), so discontinuous integrands can be
/// evaluated with the element-side continuous extension. Interval endpoints
/// are always quadrature nodes.
struct Rule1D {
  struct Element {
    int parent;  // index of the model interval this element belongs to
    double lo, hi;
    std::vector<double> nodes;
    std::vector<double> weights;
  };
  std::vector<Element> elements;

  std::size_t node_count() const;
  double weight_sum() const;
  /// True if every model interval's endpoints appear among its elements' nodes.
  bool includes_partition_nodes(const Partition1D& partition) const;
};

/// Gauss-Lobatto rule with `points_per_interval` nodes mapped to every
/// interval of the partition.
Rule1D composite_lobatto(const Partition1D& partition, int points_per_interval);

/// Reference-quality rule: every interval of the partition is subdivided so
/// that at least `min_subintervals` subintervals cover [-1,1] in total, each
/// carrying a `points`-point Gauss-Lobatto rule. Additional split locations
/// (e.g. density discontinuities) can be passed in `breakpoints`.
Rule1D fine_rule(const Partition1D& partition, int min_subintervals, int points,
                 const std::vector<double>& breakpoints = {});

/// Symmetric rule on the reference flat triangle, stored as barycentric
/// coordinates and weight fractions summing to one.
struct TriangleRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> fractions;
};

/// Positive-weight symmetric rule exact for polynomials of total degree
/// <= degree, built from a collapsed Gauss-Jacobi tensor rule averaged over
/// the three vertex rotations.
TriangleRule flat_triangle_rule(int degree);

/// Quadrature on a spherical triangulation. Element e integrates over the
/// model triangle `parent`; nodes are unit vectors obtained by radially
/// projecting a flat-triangle rule, with the surface-measure factor
/// (x.n) dA / |x|^3 folded into the weights.
struct SphereRule {
  struct Element {
    int parent;  // index of the model triangle this element belongs to
    std::vector<Vec3> nodes;
    std::vector<double> weights;
  };
  std::vector<Element> elements;

  std::size_t node_count() const;
  double weight_sum() const;
};

/// Degree-exact rule on a single spherical triangle.
SphereRule::Element spherical_triangle_rule(const SphericalTriangle& tri, int degree);

/// One rule element per triangle of the mesh.
SphereRule mesh_rule(const SphericalTriangulation& mesh, int degree);

/// Rule whose nodes live on the mesh refined `extra_levels` times, grouped by
/// the model triangle each fine triangle descends from.
SphereRule mesh_rule_subdivided(const SphericalTriangulation& mesh, int extra_levels, int degree);

/// Deterministic element-ordered integration of a scalar function. The
/// integrand receives the model element index alongside the point so that
/// element-side continuous extensions are well-defined on boundaries.
template <class F>
double integrate(const Rule1D& rule, F&& f) {
  double sum = 0.0;
  for (const auto& e : rule.elements)
    for (std::size_t i = 0; i < e.nodes.size(); ++i) sum += e.weights[i] * f(e.parent, e.nodes[i]);
  return sum;
}

template <class F>
double integrate(const SphereRule& rule, F&& f) {
  double sum = 0.0;
  for (const auto& e : rule.elements)
    for (std::size_t i = 0; i < e.nodes.size(); ++i) sum += e.weights[i] * f(e.parent, e.nodes[i]);
  return sum;
}

/// Vector-valued integration; `f(parent, point, values)` fills `values`.
/// Evaluation failures are rethrown with the offending element and node.
template <class Rule, class F>
Eigen::VectorXd integrate_vector(const Rule& rule, int dim, F&& f) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd values(dim);
  for (std::size_t e = 0; e < rule.elements.size(); ++e) {
    const auto& elem = rule.elements[e];
    for (std::size_t i = 0; i < elem.nodes.size(); ++i) {
      try {
        f(elem.parent, elem.nodes[i], values);
      } catch (const std::exception& err) {
        throw std::runtime_error("integrand failed at element " + std::to_string(e) + ", node " +
                                 std::to_string(i) + ": " + err.what());
      }
      sum.noalias() += elem.weights[i] * values;
    }
  }
  return sum;
}

}  // namespace minmom
