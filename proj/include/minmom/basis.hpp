// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "minmom/geometry.hpp"
#include "minmom/quadrature.hpp"

namespace minmom {

enum class BasisFamily {
  Monomial1D,
  Legendre1D,
  HatFunctions1D,
  PartialMoments1D,
  SphericalHarmonics,
  HatFunctionsSphere,
  PartialMomentsSphere,
};

bool is_slab(BasisFamily family);
bool is_piecewise(BasisFamily family);

/// Descriptor of one angular basis: a full-moment family of polynomial
/// degree N, or a piecewise family over its 1D partition / spherical
/// triangulation. Immutable; cheap to copy (meshes are shared).
class AngularBasis {
 public:
  static AngularBasis monomial(int order);
  static AngularBasis legendre(int order);
  static AngularBasis hat(Partition1D partition);
  static AngularBasis partial_moments(Partition1D partition);
  static AngularBasis spherical_harmonics(int order);
  static AngularBasis hat(SphericalTriangulation mesh);
  static AngularBasis partial_moments(SphericalTriangulation mesh);

  BasisFamily family() const { return family_; }
  bool slab() const { return is_slab(family_); }
  int dimension() const;
  int order() const;
  const Partition1D& partition() const;
  const SphericalTriangulation& mesh() const;

  /// Number of elements of the underlying angular mesh (1 for full-moment
  /// families).
  int element_count() const;

  /// Evaluate all components at a point of the angular domain. On element
  /// boundaries, discontinuous families use the continuous extension of the
  /// lowest-index containing element.
  void evaluate(double mu, Eigen::VectorXd& out) const;
  void evaluate(const Vec3& omega, Eigen::VectorXd& out) const;
  Eigen::VectorXd evaluate(double mu) const;
  Eigen::VectorXd evaluate(const Vec3& omega) const;

  /// Evaluate with a fixed element (continuous extension of that element for
  /// the discontinuous families). The element index is ignored by smooth
  /// families.
  void evaluate_in_element(int element, double mu, Eigen::VectorXd& out) const;
  void evaluate_in_element(int element, const Vec3& omega, Eigen::VectorXd& out) const;

  bool operator==(const AngularBasis& other) const;

 private:
  AngularBasis(BasisFamily family, int order);
  AngularBasis(BasisFamily family, std::shared_ptr<const Partition1D> partition);
  AngularBasis(BasisFamily family, std::shared_ptr<const SphericalTriangulation> mesh);

  BasisFamily family_;
  int order_ = 0;
  std::shared_ptr<const Partition1D> partition_;
  std::shared_ptr<const SphericalTriangulation> mesh_;
};

/// Moment vector u = <b psi> together with the basis it was taken against.
struct MomentVector {
  Eigen::VectorXd values;
  AngularBasis basis;

  MomentVector(Eigen::VectorXd v, AngularBasis b);
};

/// Local particle density rho(u) = <psi> recovered from the moments.
double particle_density(const MomentVector& u);
double particle_density(const Eigen::VectorXd& values, const AngularBasis& basis);

/// Coefficient vector c with b^T c identically 1 on the angular domain.
Eigen::VectorXd constant_representation(const AngularBasis& basis);

/// Orthonormal real spherical harmonics of degree N in degree-major order
/// (l = 0..N, m = -l..l), without the Condon-Shortley phase.
Eigen::VectorXd real_spherical_harmonics(int order, const Vec3& omega);

/// Component-wise integral of the basis over its angular domain; closed
/// forms where available, otherwise a degree-exact quadrature on the basis
/// mesh.
Eigen::VectorXd isotropic_moment(const AngularBasis& basis);

/// Change-of-basis matrix T with b_from = T b_to, for the supported span
/// equivalences (first-order full moments vs. two-interval hat functions,
/// and identical bases). Returns std::nullopt for unsupported pairs.
std::optional<Eigen::MatrixXd> span_change_of_basis(const AngularBasis& from,
                                                    const AngularBasis& to);

/// Tag for the first-order mixed-moment basis (1, mu on [0,1], mu on [-1,0]),
/// which is span-equivalent to the three-interval hat basis but is not a
/// standalone family here.
struct MixedMomentBasis1 {};
std::optional<Eigen::MatrixXd> span_change_of_basis(MixedMomentBasis1, const AngularBasis& to);

}  // namespace minmom
