// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "minmom/basis.hpp"
#include "minmom/quadrature.hpp"

namespace minmom {

enum class RealizabilityStatus { StrictlyRealizable, BoundaryRealizable, NotRealizable };

std::string to_string(RealizabilityStatus status);

/// Weighted Dirac combination used as a realizability witness. Atoms carry
/// the element of the angular mesh they belong to so moments against the
/// discontinuous bases are well-defined on shared boundaries.
struct AtomicDensity {
  bool slab = true;
  std::vector<double> weights;
  std::vector<double> locations_mu;   // slab geometry
  std::vector<Vec3> locations_omega;  // sphere geometry
  std::vector<int> elements;

  std::size_t size() const { return weights.size(); }
};

/// Exact moments of an atomic density: weighted basis evaluations at the
/// atom locations using each atom's element assignment.
Eigen::VectorXd moments_of(const AtomicDensity& atomic, const AngularBasis& basis);

struct RealizabilityVerdict {
  RealizabilityStatus status = RealizabilityStatus::NotRealizable;
  std::optional<int> rank;
  std::optional<AtomicDensity> witness;

  bool realizable() const { return status != RealizabilityStatus::NotRealizable; }
};

/// Hankel matrices of a 1D full-moment vector (monomial basis).
struct HankelSet {
  Eigen::MatrixXd a;  // (u_{i+j})_{i,j=0}^k
  Eigen::MatrixXd b;  // (u_{i+j+1})_{i,j=0}^k
  Eigen::MatrixXd c;  // (u_{i+j})_{i,j=1}^k
};
HankelSet hankel_matrices(const Eigen::VectorXd& monomial_moments);

/// Lower-triangular matrix L with P_l = sum_m L(l,m) mu^m.
Eigen::MatrixXd legendre_to_monomial(int order);

/// Realizability of 1D full moments via the parity-split Hankel conditions.
/// Legendre-basis inputs are converted to monomial moments first. The rank
/// is the Hankel rank; a single-atom witness is attached for order 1.
RealizabilityVerdict check_full_1d(const MomentVector& u, bool strict);

/// Decomposition of a non-negative vector into its maximal runs of positive
/// entries. Rejects vectors with negative components.
struct PositiveBlocks {
  std::vector<int> start;               // S(u)
  std::vector<int> end;                 // E(u)
  std::vector<Eigen::VectorXd> blocks;  // summing to u
  std::vector<int> orders;              // end - start + 1
};
PositiveBlocks positive_blocks(const Eigen::VectorXd& u);

/// Hat-function realizability (1D partitions and spherical triangulations):
/// component-wise non-negativity, with rank sum(ceil(order/2)) over positive
/// blocks in 1D and a paired-atom witness using exactly rank atoms. The
/// spherical variant attaches vertex atoms and carries no rank.
RealizabilityVerdict check_hat(const MomentVector& u, bool strict);

/// 1D partial-moment realizability: per interval u0 > 0 with mean u1/u0 in
/// the (closed, or open when strict) interval, or an all-zero pair.
RealizabilityVerdict check_pm_1d(const MomentVector& u, bool strict);

/// Partial-moment realizability on one spherical triangle: u0 > 0 and the
/// normalized first moment inside the convex hull of the triangle. The
/// witness combines a surface atom with flat-triangle vertex atoms. Throws
/// for u0 < 0.
RealizabilityVerdict check_pm_3d(const Eigen::Vector4d& u_block, const SphericalTriangle& tri,
                                 bool strict);

/// Family dispatch over a whole moment vector (spherical partial moments are
/// checked block-wise; zero blocks count as non-strict realizable).
RealizabilityVerdict check_moment_vector(const MomentVector& u, bool strict);

/// Nodal weights of a non-negative discrete density reproducing u on the
/// quadrature, one list per rule element. Exists whenever u is realizable
/// and the rule contains the partition nodes of each interval.
struct NodalDensity {
  std::vector<std::vector<double>> values;  // aligned with rule.elements
};
NodalDensity discrete_nodal_density(const MomentVector& u, const Rule1D& rule);
Eigen::VectorXd moments_of(const NodalDensity& nodal, const Rule1D& rule,
                           const AngularBasis& basis);

/// Membership of u in the numerically realizable set of the rule. For the
/// 1D piecewise bases this coincides with the analytic conditions provided
/// the rule contains the partition nodes (verified, and signalled as an
/// error otherwise). For spherical partial moments the normalized first
/// moment is tested against the convex hull of the triangle's quadrature
/// nodes via facet half-space tests.
bool numerically_realizable(const MomentVector& u, const Rule1D& rule, bool strict);
bool numerically_realizable(const MomentVector& u, const SphereRule& rule, bool strict);

/// Facet-based membership test in the convex hull of a 3D point cloud,
/// with 1e-12 slack (strict: -1e-12).
bool in_convex_hull(const std::vector<Vec3>& points, const Vec3& p, bool strict);

}  // namespace minmom
