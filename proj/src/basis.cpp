// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include "minmom/basis.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace minmom {

bool is_slab(BasisFamily family) {
  switch (family) {
    case BasisFamily::Monomial1D:
    case BasisFamily::Legendre1D:
    case BasisFamily::HatFunctions1D:
    case BasisFamily::PartialMoments1D:
      return true;
    default:
      return false;
  }
}

bool is_piecewise(BasisFamily family) {
  switch (family) {
    case BasisFamily::HatFunctions1D:
    case BasisFamily::PartialMoments1D:
    case BasisFamily::HatFunctionsSphere:
    case BasisFamily::PartialMomentsSphere:
      return true;
    default:
      return false;
  }
}

AngularBasis::AngularBasis(BasisFamily family, int order) : family_(family), order_(order) {
  if (order < 0) throw std::invalid_argument("basis order must be >= 0");
}

AngularBasis::AngularBasis(BasisFamily family, std::shared_ptr<const Partition1D> partition)
    : family_(family), partition_(std::move(partition)) {}

AngularBasis::AngularBasis(BasisFamily family, std::shared_ptr<const SphericalTriangulation> mesh)
    : family_(family), mesh_(std::move(mesh)) {}

AngularBasis AngularBasis::monomial(int order) { return {BasisFamily::Monomial1D, order}; }
AngularBasis AngularBasis::legendre(int order) { return {BasisFamily::Legendre1D, order}; }
AngularBasis AngularBasis::spherical_harmonics(int order) {
  return {BasisFamily::SphericalHarmonics, order};
}
AngularBasis AngularBasis::hat(Partition1D partition) {
  return {BasisFamily::HatFunctions1D, std::make_shared<const Partition1D>(std::move(partition))};
}
AngularBasis AngularBasis::partial_moments(Partition1D partition) {
  return {BasisFamily::PartialMoments1D, std::make_shared<const Partition1D>(std::move(partition))};
}
AngularBasis AngularBasis::hat(SphericalTriangulation mesh) {
  return {BasisFamily::HatFunctionsSphere,
          std::make_shared<const SphericalTriangulation>(std::move(mesh))};
}
AngularBasis AngularBasis::partial_moments(SphericalTriangulation mesh) {
  return {BasisFamily::PartialMomentsSphere,
          std::make_shared<const SphericalTriangulation>(std::move(mesh))};
}

int AngularBasis::dimension() const {
  switch (family_) {
    case BasisFamily::Monomial1D:
    case BasisFamily::Legendre1D:
      return order_ + 1;
    case BasisFamily::HatFunctions1D:
      return partition_->intervals() + 1;
    case BasisFamily::PartialMoments1D:
      return 2 * partition_->intervals();
    case BasisFamily::SphericalHarmonics:
      return (order_ + 1) * (order_ + 1);
    case BasisFamily::HatFunctionsSphere:
      return mesh_->vertex_count();
    case BasisFamily::PartialMomentsSphere:
      return 4 * mesh_->triangle_count();
  }
  throw std::logic_error("unknown basis family");
}

int AngularBasis::order() const {
  if (partition_ || mesh_) throw std::logic_error("piecewise basis has no polynomial order");
  return order_;
}

const Partition1D& AngularBasis::partition() const {
  if (!partition_) throw std::logic_error("basis carries no 1D partition");
  return *partition_;
}

const SphericalTriangulation& AngularBasis::mesh() const {
  if (!mesh_) throw std::logic_error("basis carries no spherical triangulation");
  return *mesh_;
}

int AngularBasis::element_count() const {
  if (partition_) return partition_->intervals();
  if (mesh_) return mesh_->triangle_count();
  return 1;
}

bool AngularBasis::operator==(const AngularBasis& other) const {
  if (family_ != other.family_) return false;
  switch (family_) {
    case BasisFamily::Monomial1D:
    case BasisFamily::Legendre1D:
    case BasisFamily::SphericalHarmonics:
      return order_ == other.order_;
    case BasisFamily::HatFunctions1D:
    case BasisFamily::PartialMoments1D:
      return *partition_ == *other.partition_;
    case BasisFamily::HatFunctionsSphere:
    case BasisFamily::PartialMomentsSphere:
      return mesh_->level() == other.mesh_->level() &&
             mesh_->vertex_count() == other.mesh_->vertex_count();
  }
  return false;
}

namespace {

void eval_monomials(int order, double mu, Eigen::VectorXd& out) {
  out.resize(order + 1);
  double p = 1.0;
  for (int i = 0; i <= order; ++i) {
    out[i] = p;
    p *= mu;
  }
}

void eval_legendre(int order, double mu, Eigen::VectorXd& out) {
  out.resize(order + 1);
  out[0] = 1.0;
  if (order >= 1) out[1] = mu;
  for (int l = 1; l < order; ++l)
    out[l + 1] = ((2.0 * l + 1.0) * mu * out[l] - l * out[l - 1]) / (l + 1.0);
}

}  // namespace

Eigen::VectorXd real_spherical_harmonics(int order, const Vec3& omega) {
  if (order < 0) throw std::invalid_argument("spherical harmonics need order >= 0");
  const int n = (order + 1) * (order + 1);
  Eigen::VectorXd out(n);

  const double z = omega[2];
  const double rxy = std::hypot(omega[0], omega[1]);
  const double phi = (rxy > 0.0) ? std::atan2(omega[1], omega[0]) : 0.0;

  // Associated Legendre values P_l^m(z) without the Condon-Shortley phase,
  // by the standard stable degree recurrence per order m.
  Eigen::MatrixXd plm = Eigen::MatrixXd::Zero(order + 1, order + 1);
  plm(0, 0) = 1.0;
  for (int m = 1; m <= order; ++m) plm(m, m) = (2.0 * m - 1.0) * rxy * plm(m - 1, m - 1);
  for (int m = 0; m < order; ++m) plm(m + 1, m) = (2.0 * m + 1.0) * z * plm(m, m);
  for (int m = 0; m <= order; ++m)
    for (int l = m + 2; l <= order; ++l)
      plm(l, m) = ((2.0 * l - 1.0) * z * plm(l - 1, m) - (l + m - 1.0) * plm(l - 2, m)) / (l - m);

  const double inv_sqrt4pi = 1.0 / std::sqrt(4.0 * M_PI);
  for (int l = 0; l <= order; ++l) {
    // Orthonormal scale factors sqrt((2l+1)/(4pi) (l-m)!/(l+m)!).
    double ratio = 1.0;  // (l-m)!/(l+m)!
    const double common = std::sqrt(2.0 * l + 1.0) * inv_sqrt4pi;
    out[l * l + l] = common * plm(l, 0);
    for (int m = 1; m <= l; ++m) {
      ratio /= (l - m + 1.0) * (l + m);
      const double norm = common * std::sqrt(2.0 * ratio);
      out[l * l + l + m] = norm * plm(l, m) * std::cos(m * phi);
      out[l * l + l - m] = norm * plm(l, m) * std::sin(m * phi);
    }
  }
  return out;
}

void AngularBasis::evaluate_in_element(int element, double mu, Eigen::VectorXd& out) const {
  if (!slab()) throw std::logic_error("slab evaluation of a spherical basis");
  switch (family_) {
    case BasisFamily::Monomial1D:
      eval_monomials(order_, mu, out);
      return;
    case BasisFamily::Legendre1D:
      eval_legendre(order_, mu, out);
      return;
    case BasisFamily::HatFunctions1D: {
      const auto& p = *partition_;
      out = Eigen::VectorXd::Zero(dimension());
      const double t = (mu - p.left(element)) / p.length(element);
      out[element] = 1.0 - t;
      out[element + 1] = t;
      return;
    }
    case BasisFamily::PartialMoments1D: {
      out = Eigen::VectorXd::Zero(dimension());
      out[2 * element] = 1.0;
      out[2 * element + 1] = mu;
      return;
    }
    default:
      throw std::logic_error("unknown slab basis family");
  }
}

void AngularBasis::evaluate_in_element(int element, const Vec3& omega, Eigen::VectorXd& out) const {
  if (slab()) throw std::logic_error("spherical evaluation of a slab basis");
  switch (family_) {
    case BasisFamily::SphericalHarmonics:
      out = real_spherical_harmonics(order_, omega);
      return;
    case BasisFamily::HatFunctionsSphere: {
      out = Eigen::VectorXd::Zero(dimension());
      const auto lambda = spherical_barycentric(mesh_->triangle(element), omega);
      const auto& vids = mesh_->triangle_vertices(element);
      for (int c = 0; c < 3; ++c) out[vids[static_cast<std::size_t>(c)]] += lambda[static_cast<std::size_t>(c)];
      return;
    }
    case BasisFamily::PartialMomentsSphere: {
      out = Eigen::VectorXd::Zero(dimension());
      out[4 * element] = 1.0;
      out[4 * element + 1] = omega[0];
      out[4 * element + 2] = omega[1];
      out[4 * element + 3] = omega[2];
      return;
    }
    default:
      throw std::logic_error("unknown spherical basis family");
  }
}

void AngularBasis::evaluate(double mu, Eigen::VectorXd& out) const {
  if (!slab()) throw std::logic_error("slab evaluation of a spherical basis");
  if (std::abs(mu) > 1.0 + 1e-12) throw std::invalid_argument("point outside [-1,1]");
  const int element = is_piecewise(family_) ? partition_->locate(mu) : 0;
  evaluate_in_element(element, mu, out);
}

void AngularBasis::evaluate(const Vec3& omega, Eigen::VectorXd& out) const {
  if (slab()) throw std::logic_error("spherical evaluation of a slab basis");
  if (std::abs(omega.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("point is not a unit direction");
  const int element = is_piecewise(family_) ? mesh_->locate(omega) : 0;
  evaluate_in_element(element, omega, out);
}

Eigen::VectorXd AngularBasis::evaluate(double mu) const {
  Eigen::VectorXd out;
  evaluate(mu, out);
  return out;
}

Eigen::VectorXd AngularBasis::evaluate(const Vec3& omega) const {
  Eigen::VectorXd out;
  evaluate(omega, out);
  return out;
}

MomentVector::MomentVector(Eigen::VectorXd v, AngularBasis b)
    : values(std::move(v)), basis(std::move(b)) {
  if (values.size() != basis.dimension())
    throw std::invalid_argument("moment vector length does not match basis dimension");
  if (!std::isfinite(particle_density(values, basis)))
    throw std::invalid_argument("moment vector has non-finite particle density");
}

double particle_density(const Eigen::VectorXd& values, const AngularBasis& basis) {
  switch (basis.family()) {
    case BasisFamily::Monomial1D:
    case BasisFamily::Legendre1D:
      return values[0];
    case BasisFamily::SphericalHarmonics:
      return values[0] * std::sqrt(4.0 * M_PI);
    case BasisFamily::HatFunctions1D:
    case BasisFamily::HatFunctionsSphere:
      return values.sum();
    case BasisFamily::PartialMoments1D: {
      double rho = 0.0;
      for (int j = 0; j < values.size(); j += 2) rho += values[j];
      return rho;
    }
    case BasisFamily::PartialMomentsSphere: {
      double rho = 0.0;
      for (int j = 0; j < values.size(); j += 4) rho += values[j];
      return rho;
    }
  }
  throw std::logic_error("unknown basis family");
}

double particle_density(const MomentVector& u) { return particle_density(u.values, u.basis); }

Eigen::VectorXd constant_representation(const AngularBasis& basis) {
  const int n = basis.dimension();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  switch (basis.family()) {
    case BasisFamily::Monomial1D:
    case BasisFamily::Legendre1D:
      c[0] = 1.0;
      return c;
    case BasisFamily::SphericalHarmonics:
      c[0] = std::sqrt(4.0 * M_PI);
      return c;
    case BasisFamily::HatFunctions1D:
    case BasisFamily::HatFunctionsSphere:
      c.setOnes();
      return c;
    case BasisFamily::PartialMoments1D:
      for (int j = 0; j < n; j += 2) c[j] = 1.0;
      return c;
    case BasisFamily::PartialMomentsSphere:
      for (int j = 0; j < n; j += 4) c[j] = 1.0;
      return c;
  }
  throw std::logic_error("unknown basis family");
}

Eigen::VectorXd isotropic_moment(const AngularBasis& basis) {
  const int n = basis.dimension();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  switch (basis.family()) {
    case BasisFamily::Monomial1D:
      for (int i = 0; i <= basis.order(); ++i) u[i] = (i % 2 == 0) ? 2.0 / (i + 1.0) : 0.0;
      return u;
    case BasisFamily::Legendre1D:
      u[0] = 2.0;
      return u;
    case BasisFamily::SphericalHarmonics:
      u[0] = std::sqrt(4.0 * M_PI);
      return u;
    case BasisFamily::HatFunctions1D: {
      const auto& p = basis.partition();
      for (int j = 0; j < p.intervals(); ++j) {
        u[j] += 0.5 * p.length(j);
        u[j + 1] += 0.5 * p.length(j);
      }
      return u;
    }
    case BasisFamily::PartialMoments1D: {
      const auto& p = basis.partition();
      for (int j = 0; j < p.intervals(); ++j) {
        u[2 * j] = p.length(j);
        u[2 * j + 1] = 0.5 * (p.right(j) * p.right(j) - p.left(j) * p.left(j));
      }
      return u;
    }
    case BasisFamily::PartialMomentsSphere: {
      const auto& mesh = basis.mesh();
      for (int t = 0; t < mesh.triangle_count(); ++t) {
        const SphericalTriangle tri = mesh.triangle(t);
        u[4 * t] = spherical_triangle_area(tri);
        u.segment<3>(4 * t + 1) = spherical_triangle_first_moment(tri);
      }
      return u;
    }
    case BasisFamily::HatFunctionsSphere: {
      // No elementary closed form; integrate the barycentric components with
      // a degree-exact rule on the basis mesh.
      const SphereRule rule = mesh_rule(basis.mesh(), 18);
      return integrate_vector(rule, n, [&](int parent, const Vec3& omega, Eigen::VectorXd& out) {
        basis.evaluate_in_element(parent, omega, out);
      });
    }
  }
  throw std::logic_error("unknown basis family");
}

std::optional<Eigen::MatrixXd> span_change_of_basis(const AngularBasis& from,
                                                    const AngularBasis& to) {
  if (from == to) return Eigen::MatrixXd::Identity(from.dimension(), to.dimension());

  auto is_hat_on = [](const AngularBasis& b, const std::vector<double>& nodes) {
    return b.family() == BasisFamily::HatFunctions1D && b.partition().nodes() == nodes;
  };
  const bool from_full1 = (from.family() == BasisFamily::Monomial1D ||
                           from.family() == BasisFamily::Legendre1D) &&
                          from.order() == 1;
  const bool to_full1 =
      (to.family() == BasisFamily::Monomial1D || to.family() == BasisFamily::Legendre1D) &&
      to.order() == 1;

  // (1, mu) against the two-interval hat basis: 1 = h0 + h1, mu = -h0 + h1.
  Eigen::MatrixXd t(2, 2);
  t << 1, 1, -1, 1;
  if (from_full1 && is_hat_on(to, {-1.0, 1.0})) return t;
  if (is_hat_on(from, {-1.0, 1.0}) && to_full1) return Eigen::MatrixXd(t.inverse());
  return std::nullopt;
}

std::optional<Eigen::MatrixXd> span_change_of_basis(MixedMomentBasis1, const AngularBasis& to) {
  if (to.family() != BasisFamily::HatFunctions1D) return std::nullopt;
  if (to.partition().nodes() != std::vector<double>{-1.0, 0.0, 1.0}) return std::nullopt;
  // (1, mu 1_{[0,1]}, mu 1_{[-1,0]}) = (h0+h1+h2, h2, -h0).
  Eigen::MatrixXd t(3, 3);
  t << 1, 1, 1, 0, 0, 1, -1, 0, 0;
  return t;
}

}  // namespace minmom
