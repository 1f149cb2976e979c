// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include "minmom/realizability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

namespace minmom {

namespace {
constexpr double kEigTol = 1e-12;
constexpr double kHullSlack = 1e-12;
}  // namespace

std::string to_string(RealizabilityStatus status) {
  switch (status) {
    case RealizabilityStatus::StrictlyRealizable: return "strictly-realizable";
    case RealizabilityStatus::BoundaryRealizable: return "boundary-realizable";
    case RealizabilityStatus::NotRealizable: return "not-realizable";
  }
  return "?";
}

Eigen::VectorXd moments_of(const AtomicDensity& atomic, const AngularBasis& basis) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(basis.dimension());
  Eigen::VectorXd values(basis.dimension());
  for (std::size_t a = 0; a < atomic.size(); ++a) {
    if (atomic.slab)
      basis.evaluate_in_element(atomic.elements[a], atomic.locations_mu[a], values);
    else
      basis.evaluate_in_element(atomic.elements[a], atomic.locations_omega[a], values);
    u += atomic.weights[a] * values;
  }
  return u;
}

// ---------------------------------------------------------------------------
// Full moments (Hankel conditions)

HankelSet hankel_matrices(const Eigen::VectorXd& u) {
  const int order = static_cast<int>(u.size()) - 1;
  const int k = order / 2;
  HankelSet h;
  if (order % 2 == 0) {
    h.a.resize(k + 1, k + 1);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) h.a(i, j) = u[i + j];
    h.b.resize(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) h.b(i, j) = u[i + j + 1];
    h.c.resize(k, k);
    for (int i = 1; i <= k; ++i)
      for (int j = 1; j <= k; ++j) h.c(i - 1, j - 1) = u[i + j];
  } else {
    h.a.resize(k + 1, k + 1);
    h.b.resize(k + 1, k + 1);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) {
        h.a(i, j) = u[i + j];
        h.b(i, j) = u[i + j + 1];
      }
    h.c.resize(k, k);
    for (int i = 1; i <= k; ++i)
      for (int j = 1; j <= k; ++j) h.c(i - 1, j - 1) = u[i + j];
  }
  return h;
}

Eigen::MatrixXd legendre_to_monomial(int order) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(order + 1, order + 1);
  l(0, 0) = 1.0;
  if (order >= 1) l(1, 1) = 1.0;
  for (int deg = 1; deg < order; ++deg) {
    // (deg+1) P_{deg+1} = (2 deg+1) mu P_deg - deg P_{deg-1}
    for (int m = 0; m <= deg; ++m)
      l(deg + 1, m + 1) += (2.0 * deg + 1.0) * l(deg, m) / (deg + 1.0);
    for (int m = 0; m <= deg - 1; ++m) l(deg + 1, m) -= deg * l(deg - 1, m) / (deg + 1.0);
  }
  return l;
}

namespace {

enum class Definiteness { Indefinite, SemiDefinite, PositiveDefinite };

Definiteness classify(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return Definiteness::PositiveDefinite;  // empty condition holds
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues().minCoeff();
  const double lambda_max = std::max(0.0, eig.eigenvalues().maxCoeff());
  const double band = kEigTol * (1.0 + lambda_max);
  if (lambda_min > band) return Definiteness::PositiveDefinite;
  if (lambda_min >= -band) return Definiteness::SemiDefinite;
  return Definiteness::Indefinite;
}

bool is_singular(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double lambda_max = std::max(0.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  return eig.eigenvalues().cwiseAbs().minCoeff() <= kEigTol * (1.0 + lambda_max);
}

int hankel_rank(const Eigen::VectorXd& u_monomial) {
  const int order = static_cast<int>(u_monomial.size()) - 1;
  if (order % 2 == 1) return hankel_rank(u_monomial.head(order));  // drop the odd tail
  const int k = order / 2;
  for (int j = 1; j <= k; ++j) {
    Eigen::MatrixXd a(j + 1, j + 1);
    for (int i = 0; i <= j; ++i)
      for (int jj = 0; jj <= j; ++jj) a(i, jj) = u_monomial[i + jj];
    if (is_singular(a)) return j;
  }
  return k + 1;
}

}  // namespace

RealizabilityVerdict check_full_1d(const MomentVector& u, bool strict) {
  Eigen::VectorXd m;
  switch (u.basis.family()) {
    case BasisFamily::Monomial1D: m = u.values; break;
    case BasisFamily::Legendre1D: {
      const Eigen::MatrixXd l = legendre_to_monomial(u.basis.order());
      m = l.triangularView<Eigen::Lower>().solve(u.values);
      break;
    }
    default: throw std::invalid_argument("full-moment check expects a 1D polynomial basis");
  }

  const int order = static_cast<int>(m.size()) - 1;
  const HankelSet h = hankel_matrices(m);
  Definiteness first, second;
  if (order % 2 == 0) {
    first = classify(h.a);
    const int k = order / 2;
    if (k == 0) {
      second = Definiteness::PositiveDefinite;
    } else {
      Eigen::MatrixXd a_low(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a_low(i, j) = m[i + j];
      second = classify(a_low - h.c);
    }
  } else {
    first = classify(h.a - h.b);
    second = classify(h.a + h.b);
  }

  RealizabilityVerdict verdict;
  if (first == Definiteness::Indefinite || second == Definiteness::Indefinite) {
    verdict.status = RealizabilityStatus::NotRealizable;
    return verdict;
  }
  const bool strictly = first == Definiteness::PositiveDefinite &&
                        second == Definiteness::PositiveDefinite;
  verdict.status = strictly ? RealizabilityStatus::StrictlyRealizable
                            : RealizabilityStatus::BoundaryRealizable;
  (void)strict;
  verdict.rank = hankel_rank(m);

  if (order == 1 && m[0] > 0.0) {
    AtomicDensity atomic;
    atomic.slab = true;
    atomic.weights = {m[0]};
    atomic.locations_mu = {m[1] / m[0]};
    atomic.elements = {0};
    verdict.witness = std::move(atomic);
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Positive blocks and hat-function realizability

PositiveBlocks positive_blocks(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  for (int i = 0; i < n; ++i)
    if (u[i] < 0.0) throw std::invalid_argument("positive_blocks expects non-negative entries");
  PositiveBlocks blocks;
  auto at = [&](int i) { return (i < 0 || i >= n) ? 0.0 : u[i]; };
  for (int i = 0; i < n; ++i) {
    if (at(i - 1) == 0.0 && u[i] > 0.0) blocks.start.push_back(i);
    if (u[i] > 0.0 && at(i + 1) == 0.0) blocks.end.push_back(i);
  }
  for (std::size_t l = 0; l < blocks.start.size(); ++l) {
    Eigen::VectorXd block = Eigen::VectorXd::Zero(n);
    for (int i = blocks.start[l]; i <= blocks.end[l]; ++i) block[i] = u[i];
    blocks.blocks.push_back(std::move(block));
    blocks.orders.push_back(blocks.end[l] - blocks.start[l] + 1);
  }
  return blocks;
}

namespace {

// Paired-atom representation of one positive block of hat moments: adjacent
// node pairs carry one atom at their mass-weighted mean; an odd leftover
// node keeps a single atom in place.
void append_hat_block_atoms(const Partition1D& partition, const Eigen::VectorXd& u, int start,
                            int end, AtomicDensity& atomic) {
  int i = start;
  for (; i + 1 <= end; i += 2) {
    const double mass = u[i] + u[i + 1];
    const double location = (u[i] * partition.node(i) + u[i + 1] * partition.node(i + 1)) / mass;
    atomic.weights.push_back(mass);
    atomic.locations_mu.push_back(location);
    atomic.elements.push_back(i);  // atom lies in [mu_i, mu_{i+1}]
  }
  if (i == end) {
    atomic.weights.push_back(u[end]);
    atomic.locations_mu.push_back(partition.node(end));
    atomic.elements.push_back(end > 0 ? end - 1 : 0);  // node atoms go to the left interval
  }
}

}  // namespace

RealizabilityVerdict check_hat(const MomentVector& u, bool strict) {
  RealizabilityVerdict verdict;
  if (u.basis.family() == BasisFamily::HatFunctions1D) {
    const auto& partition = u.basis.partition();
    const int n = static_cast<int>(u.values.size());
    for (int i = 0; i < n; ++i)
      if (u.values[i] < 0.0) {
        verdict.status = RealizabilityStatus::NotRealizable;
        return verdict;
      }
    const bool strictly = (u.values.array() > 0.0).all();
    verdict.status = strictly ? RealizabilityStatus::StrictlyRealizable
                              : RealizabilityStatus::BoundaryRealizable;
    (void)strict;

    const PositiveBlocks blocks = positive_blocks(u.values);
    int rank = 0;
    for (int ord : blocks.orders) rank += (ord + 1) / 2;
    verdict.rank = rank;

    AtomicDensity atomic;
    atomic.slab = true;
    for (std::size_t l = 0; l < blocks.start.size(); ++l)
      append_hat_block_atoms(partition, u.values, blocks.start[l], blocks.end[l], atomic);
    verdict.witness = std::move(atomic);
    return verdict;
  }

  if (u.basis.family() == BasisFamily::HatFunctionsSphere) {
    const auto& mesh = u.basis.mesh();
    for (int i = 0; i < u.values.size(); ++i)
      if (u.values[i] < 0.0) {
        verdict.status = RealizabilityStatus::NotRealizable;
        return verdict;
      }
    const bool strictly = (u.values.array() > 0.0).all();
    verdict.status = strictly ? RealizabilityStatus::StrictlyRealizable
                              : RealizabilityStatus::BoundaryRealizable;
    AtomicDensity atomic;
    atomic.slab = false;
    for (int i = 0; i < u.values.size(); ++i) {
      if (u.values[i] == 0.0) continue;
      atomic.weights.push_back(u.values[i]);
      atomic.locations_omega.push_back(mesh.vertex(i));
      atomic.elements.push_back(mesh.triangles_at_vertex(i).front());
    }
    verdict.witness = std::move(atomic);
    return verdict;
  }

  throw std::invalid_argument("hat-function check expects a hat basis");
}

// ---------------------------------------------------------------------------
// Partial moments

RealizabilityVerdict check_pm_1d(const MomentVector& u, bool strict) {
  if (u.basis.family() != BasisFamily::PartialMoments1D)
    throw std::invalid_argument("partial-moment check expects the 1D partial-moment basis");
  if (u.values.size() % 2 != 0) throw std::invalid_argument("partial moments come in pairs");
  if (!u.values.allFinite()) throw std::invalid_argument("moment vector has non-finite entries");

  const auto& partition = u.basis.partition();
  const int k = partition.intervals();

  RealizabilityVerdict verdict;
  AtomicDensity atomic;
  atomic.slab = true;
  bool all_strict = true;
  int rank = 0;
  for (int j = 0; j < k; ++j) {
    const double m0 = u.values[2 * j], m1 = u.values[2 * j + 1];
    const double lo = partition.left(j), hi = partition.right(j);
    if (m0 == 0.0 && m1 == 0.0) {
      all_strict = false;  // zero mass is realizable only in the closed sense
      continue;
    }
    if (!(m0 > 0.0)) {
      verdict.status = RealizabilityStatus::NotRealizable;
      return verdict;
    }
    const double mean = m1 / m0;
    if (mean < lo || mean > hi) {
      verdict.status = RealizabilityStatus::NotRealizable;
      return verdict;
    }
    ++rank;
    if (mean > lo && mean < hi) {
      atomic.weights.push_back(m0);
      atomic.locations_mu.push_back(mean);
      atomic.elements.push_back(j);
    } else {
      // Boundary mean: the endpoint pair degenerates to a single endpoint atom.
      all_strict = false;
      atomic.weights.push_back(m0);
      atomic.locations_mu.push_back(mean <= lo ? lo : hi);
      atomic.elements.push_back(j);
    }
  }
  (void)strict;
  verdict.status = all_strict ? RealizabilityStatus::StrictlyRealizable
                              : RealizabilityStatus::BoundaryRealizable;
  verdict.rank = rank;
  verdict.witness = std::move(atomic);
  return verdict;
}

RealizabilityVerdict check_pm_3d(const Eigen::Vector4d& u_block, const SphericalTriangle& tri,
                                 bool strict) {
  if (!u_block.allFinite()) throw std::invalid_argument("moment block has non-finite entries");
  if (u_block[0] < 0.0) throw std::invalid_argument("negative zeroth partial moment");

  RealizabilityVerdict verdict;
  const Vec3 first(u_block[1], u_block[2], u_block[3]);
  if (u_block[0] == 0.0) {
    if (first.norm() == 0.0) {
      verdict.status = RealizabilityStatus::BoundaryRealizable;
      verdict.witness = AtomicDensity{false, {}, {}, {}, {}};
      return verdict;
    }
    verdict.status = RealizabilityStatus::NotRealizable;
    return verdict;
  }

  const Vec3 normalized = first / u_block[0];
  if (!in_spherical_hull(tri, normalized, false)) {
    verdict.status = RealizabilityStatus::NotRealizable;
    return verdict;
  }
  verdict.status = in_spherical_hull(tri, normalized, true)
                       ? RealizabilityStatus::StrictlyRealizable
                       : RealizabilityStatus::BoundaryRealizable;
  (void)strict;

  // Witness: a surface atom at the radial projection combined with vertex
  // atoms on the flat triangle, weighted along the ray through the point.
  AtomicDensity atomic;
  atomic.slab = false;
  const double radius = normalized.norm();
  const Vec3 omega = normalized / radius;
  Vec3 plane_normal = (tri.b - tri.a).cross(tri.c - tri.a);
  if (plane_normal.dot(tri.a) < 0.0) plane_normal = -plane_normal;
  const double t_flat = plane_normal.dot(tri.a) / plane_normal.dot(omega);
  double surface_fraction;
  if (radius >= 1.0 - kHullSlack)
    surface_fraction = 1.0;
  else if (radius <= t_flat + kHullSlack)
    surface_fraction = 0.0;
  else
    surface_fraction = (radius - t_flat) / (1.0 - t_flat);

  if (surface_fraction > 0.0) {
    atomic.weights.push_back(u_block[0] * surface_fraction);
    atomic.locations_omega.push_back(omega);
    atomic.elements.push_back(0);
  }
  if (surface_fraction < 1.0) {
    const auto lambda = spherical_barycentric(tri, omega);
    const Vec3 vertices[3] = {tri.a, tri.b, tri.c};
    for (int c = 0; c < 3; ++c) {
      const double w = u_block[0] * (1.0 - surface_fraction) * lambda[static_cast<std::size_t>(c)];
      if (w == 0.0) continue;
      atomic.weights.push_back(w);
      atomic.locations_omega.push_back(vertices[c]);
      atomic.elements.push_back(0);
    }
  }
  verdict.witness = std::move(atomic);
  return verdict;
}

RealizabilityVerdict check_moment_vector(const MomentVector& u, bool strict) {
  switch (u.basis.family()) {
    case BasisFamily::Monomial1D:
    case BasisFamily::Legendre1D:
      return check_full_1d(u, strict);
    case BasisFamily::HatFunctions1D:
    case BasisFamily::HatFunctionsSphere:
      return check_hat(u, strict);
    case BasisFamily::PartialMoments1D:
      return check_pm_1d(u, strict);
    case BasisFamily::PartialMomentsSphere: {
      const auto& mesh = u.basis.mesh();
      RealizabilityVerdict combined;
      combined.status = RealizabilityStatus::StrictlyRealizable;
      AtomicDensity atomic;
      atomic.slab = false;
      for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Eigen::Vector4d block = u.values.segment<4>(4 * t);
        if (block[0] < 0.0) {
          combined.status = RealizabilityStatus::NotRealizable;
          combined.witness.reset();
          return combined;
        }
        RealizabilityVerdict verdict = check_pm_3d(block, mesh.triangle(t), strict);
        if (verdict.status == RealizabilityStatus::NotRealizable) {
          combined.status = RealizabilityStatus::NotRealizable;
          combined.witness.reset();
          return combined;
        }
        if (verdict.status == RealizabilityStatus::BoundaryRealizable &&
            combined.status == RealizabilityStatus::StrictlyRealizable)
          combined.status = RealizabilityStatus::BoundaryRealizable;
        if (verdict.witness) {
          const auto& w = *verdict.witness;
          for (std::size_t a = 0; a < w.size(); ++a) {
            atomic.weights.push_back(w.weights[a]);
            atomic.locations_omega.push_back(w.locations_omega[a]);
            atomic.elements.push_back(t);
          }
        }
      }
      combined.witness = std::move(atomic);
      return combined;
    }
    default:
      throw std::invalid_argument("no realizability conditions for this basis family");
  }
}

// ---------------------------------------------------------------------------
// Numerically realizable sets

namespace {

// Endpoint masses (a0, a1) per interval of an endpoint-atom representation.
std::vector<std::pair<double, double>> endpoint_masses(const MomentVector& u) {
  const auto& partition = u.basis.partition();
  const int k = partition.intervals();
  std::vector<std::pair<double, double>> masses(static_cast<std::size_t>(k), {0.0, 0.0});
  if (u.basis.family() == BasisFamily::HatFunctions1D) {
    // Node atoms u_i at mu_i, assigned to the left interval when it exists.
    masses[0].first = u.values[0];
    for (int i = 1; i <= k; ++i) masses[static_cast<std::size_t>(i - 1)].second = u.values[i];
  } else if (u.basis.family() == BasisFamily::PartialMoments1D) {
    for (int j = 0; j < k; ++j) {
      const double m0 = u.values[2 * j], m1 = u.values[2 * j + 1];
      const double lo = partition.left(j), hi = partition.right(j), len = hi - lo;
      masses[static_cast<std::size_t>(j)] = {(hi * m0 - m1) / len, (m1 - lo * m0) / len};
    }
  } else {
    throw std::invalid_argument("nodal densities exist for the 1D piecewise bases only");
  }
  return masses;
}

}  // namespace

NodalDensity discrete_nodal_density(const MomentVector& u, const Rule1D& rule) {
  const auto& partition = u.basis.partition();
  if (!rule.includes_partition_nodes(partition))
    throw std::invalid_argument("quadrature does not contain the partition nodes");
  const auto masses = endpoint_masses(u);

  NodalDensity nodal;
  nodal.values.resize(rule.elements.size());
  std::vector<bool> left_done(masses.size(), false), right_done(masses.size(), false);
  for (std::size_t e = 0; e < rule.elements.size(); ++e) {
    const auto& elem = rule.elements[e];
    nodal.values[e].assign(elem.nodes.size(), 0.0);
    const int j = elem.parent;
    const double lo = partition.left(j), hi = partition.right(j);
    for (std::size_t i = 0; i < elem.nodes.size(); ++i) {
      if (!left_done[static_cast<std::size_t>(j)] && std::abs(elem.nodes[i] - lo) <= 1e-14) {
        nodal.values[e][i] = masses[static_cast<std::size_t>(j)].first / elem.weights[i];
        left_done[static_cast<std::size_t>(j)] = true;
      } else if (!right_done[static_cast<std::size_t>(j)] && std::abs(elem.nodes[i] - hi) <= 1e-14) {
        nodal.values[e][i] = masses[static_cast<std::size_t>(j)].second / elem.weights[i];
        right_done[static_cast<std::size_t>(j)] = true;
      }
    }
  }
  return nodal;
}

Eigen::VectorXd moments_of(const NodalDensity& nodal, const Rule1D& rule,
                           const AngularBasis& basis) {
  const int n = basis.dimension();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd values(n);
  for (std::size_t e = 0; e < rule.elements.size(); ++e) {
    const auto& elem = rule.elements[e];
    for (std::size_t i = 0; i < elem.nodes.size(); ++i) {
      const double psi = nodal.values[e][i];
      if (psi == 0.0) continue;
      basis.evaluate_in_element(elem.parent, elem.nodes[i], values);
      u += elem.weights[i] * psi * values;
    }
  }
  return u;
}

bool numerically_realizable(const MomentVector& u, const Rule1D& rule, bool strict) {
  const auto family = u.basis.family();
  if (family != BasisFamily::HatFunctions1D && family != BasisFamily::PartialMoments1D)
    throw std::invalid_argument("1D numerically realizable set needs a piecewise basis");
  if (!rule.includes_partition_nodes(u.basis.partition()))
    throw std::invalid_argument("quadrature does not contain the partition nodes");
  const RealizabilityVerdict verdict = family == BasisFamily::HatFunctions1D
                                           ? check_hat(u, strict)
                                           : check_pm_1d(u, strict);
  if (strict) return verdict.status == RealizabilityStatus::StrictlyRealizable;
  return verdict.realizable();
}

bool numerically_realizable(const MomentVector& u, const SphereRule& rule, bool strict) {
  if (u.basis.family() != BasisFamily::PartialMomentsSphere)
    throw std::invalid_argument("spherical numerically realizable set covers partial moments");
  const auto& mesh = u.basis.mesh();
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const Eigen::Vector4d block = u.values.segment<4>(4 * t);
    const Vec3 first(block[1], block[2], block[3]);
    if (block[0] == 0.0 && first.norm() == 0.0) {
      if (strict) return false;
      continue;
    }
    if (!(block[0] > 0.0)) return false;
    std::vector<Vec3> nodes;
    for (const auto& elem : rule.elements) {
      if (elem.parent != t) continue;
      nodes.insert(nodes.end(), elem.nodes.begin(), elem.nodes.end());
    }
    if (nodes.empty()) return false;
    if (!in_convex_hull(nodes, first / block[0], strict)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Convex hull membership (incremental hull over a small point cloud)

namespace {

struct HullFace {
  int a, b, c;
  Vec3 normal;   // unit outward
  double offset; // normal . x = offset on the face plane
};

std::vector<HullFace> build_hull(const std::vector<Vec3>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 4) throw std::invalid_argument("hull needs at least 4 points");

  // Seed tetrahedron: spread points far apart to keep the start non-degenerate.
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = -1.0;
  for (int i = 1; i < n; ++i) {
    const double d = (points[static_cast<std::size_t>(i)] - points[0]).norm();
    if (d > best) best = d, i1 = i;
  }
  best = -1.0;
  const Vec3 dir = points[static_cast<std::size_t>(i1)] - points[0];
  for (int i = 0; i < n; ++i) {
    const Vec3 rel = points[static_cast<std::size_t>(i)] - points[0];
    const double d = (rel - rel.dot(dir) / dir.squaredNorm() * dir).norm();
    if (d > best) best = d, i2 = i;
  }
  const Vec3 plane_n = dir.cross(points[static_cast<std::size_t>(i2)] - points[0]);
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(plane_n.dot(points[static_cast<std::size_t>(i)] - points[0]));
    if (d > best) best = d, i3 = i;
  }
  if (best <= 1e-12 * (1.0 + plane_n.norm()))
    throw std::invalid_argument("hull points are degenerate");

  const Vec3 interior = 0.25 * (points[static_cast<std::size_t>(i0)] + points[static_cast<std::size_t>(i1)] +
                                points[static_cast<std::size_t>(i2)] + points[static_cast<std::size_t>(i3)]);

  auto make_face = [&](int a, int b, int c) {
    HullFace f{a, b, c, Vec3::Zero(), 0.0};
    f.normal = (points[static_cast<std::size_t>(b)] - points[static_cast<std::size_t>(a)])
                   .cross(points[static_cast<std::size_t>(c)] - points[static_cast<std::size_t>(a)]);
    f.normal.normalize();
    if (f.normal.dot(interior - points[static_cast<std::size_t>(a)]) > 0.0) {
      std::swap(f.b, f.c);
      f.normal = -f.normal;
    }
    f.offset = f.normal.dot(points[static_cast<std::size_t>(f.a)]);
    return f;
  };

  std::vector<HullFace> faces = {make_face(i0, i1, i2), make_face(i0, i1, i3),
                                 make_face(i0, i2, i3), make_face(i1, i2, i3)};

  const double eps = 1e-12;
  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    const Vec3& x = points[static_cast<std::size_t>(p)];
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (faces[f].normal.dot(x) - faces[f].offset > eps) visible[f] = 1, any = true;
    if (!any) continue;

    // Horizon edges appear in exactly one visible face.
    std::map<std::pair<int, int>, int> edge_count;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      const int vs[3] = {faces[f].a, faces[f].b, faces[f].c};
      for (int e = 0; e < 3; ++e) edge_count[std::minmax(vs[e], vs[(e + 1) % 3])] += 1;
    }
    std::vector<HullFace> next;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (const auto& [key, count] : edge_count) {
      if (count != 1) continue;
      next.push_back(make_face(key.first, key.second, p));
    }
    faces.swap(next);
  }
  return faces;
}

}  // namespace

bool in_convex_hull(const std::vector<Vec3>& points, const Vec3& p, bool strict) {
  const std::vector<HullFace> faces = build_hull(points);
  const double slack = strict ? -kHullSlack : kHullSlack;
  for (const auto& f : faces)
    if (f.normal.dot(p) - f.offset > slack) return false;
  return true;
}

}  // namespace minmom
