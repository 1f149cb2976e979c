// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "minmom/basis.hpp"
#include "minmom/quadrature.hpp"

using namespace minmom;

namespace {

Vec3 random_direction(std::mt19937& rng) {
  std::normal_distribution<double> normal;
  return project_to_sphere(Vec3(normal(rng), normal(rng), normal(rng)));
}

}  // namespace

TEST_CASE("basis dimensions") {
  CHECK(AngularBasis::monomial(2).dimension() == 3);
  CHECK(AngularBasis::legendre(7).dimension() == 8);
  CHECK(AngularBasis::hat(Partition1D::equidistant(2)).dimension() == 3);
  CHECK(AngularBasis::partial_moments(Partition1D::equidistant(4)).dimension() == 8);
  CHECK(AngularBasis::spherical_harmonics(2).dimension() == 9);
  CHECK(AngularBasis::hat(SphericalTriangulation::refined_octants(1)).dimension() == 18);
  CHECK(AngularBasis::partial_moments(SphericalTriangulation::octants()).dimension() == 32);
}

TEST_CASE("pointwise evaluation") {
  SUBCASE("hat Lagrange property") {
    const AngularBasis hat = AngularBasis::hat(Partition1D::equidistant(2));
    const Eigen::VectorXd at_zero = hat.evaluate(0.0);
    CHECK(at_zero[0] == 0.0);
    CHECK(at_zero[1] == 1.0);
    CHECK(at_zero[2] == 0.0);
  }

  SUBCASE("monomials") {
    const Eigen::VectorXd values = AngularBasis::monomial(2).evaluate(0.5);
    CHECK(values[0] == 1.0);
    CHECK(values[1] == 0.5);
    CHECK(values[2] == 0.25);
  }

  SUBCASE("hat partition of unity, 1D and sphere") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const AngularBasis hat = AngularBasis::hat(Partition1D::equidistant(7));
    for (int i = 0; i < 1000; ++i) {
      const Eigen::VectorXd values = hat.evaluate(dist(rng));
      CHECK(values.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(values.minCoeff() >= 0.0);
    }
    const AngularBasis sphere_hat = AngularBasis::hat(SphericalTriangulation::refined_octants(1));
    for (int i = 0; i < 1000; ++i) {
      const Eigen::VectorXd values = sphere_hat.evaluate(random_direction(rng));
      CHECK(values.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(values.minCoeff() >= 0.0);
    }
  }

  SUBCASE("spherical partial moments fill one block") {
    const AngularBasis pm = AngularBasis::partial_moments(SphericalTriangulation::octants());
    const Vec3 omega = project_to_sphere(Vec3(1, 1, 1));
    const Eigen::VectorXd values = pm.evaluate(omega);
    const int t = SphericalTriangulation::octants().locate(omega);
    for (int block = 0; block < 8; ++block) {
      if (block == t) {
        CHECK(values[4 * block] == 1.0);
        CHECK(values[4 * block + 1] == doctest::Approx(omega[0]));
        CHECK(values[4 * block + 2] == doctest::Approx(omega[1]));
        CHECK(values[4 * block + 3] == doctest::Approx(omega[2]));
      } else {
        CHECK(values.segment<4>(4 * block).norm() == 0.0);
      }
    }
  }

  SUBCASE("off-domain points are rejected") {
    CHECK_THROWS_AS(AngularBasis::legendre(2).evaluate(1.5), std::invalid_argument);
    CHECK_THROWS_AS(AngularBasis::spherical_harmonics(1).evaluate(Vec3(0.5, 0, 0)),
                    std::invalid_argument);
  }
}

TEST_CASE("hat locality") {
  const Partition1D partition = Partition1D::equidistant(5);
  const AngularBasis hat = AngularBasis::hat(partition);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double mu = dist(rng);
    const Eigen::VectorXd values = hat.evaluate(mu);
    for (int i = 0; i <= partition.intervals(); ++i) {
      const double support_lo = partition.node(std::max(i - 1, 0));
      const double support_hi = partition.node(std::min(i + 1, partition.intervals()));
      if (mu < support_lo || mu > support_hi) CHECK(values[i] == 0.0);
    }
  }

  // A spherical hat component vanishes on triangles not containing its vertex.
  const SphericalTriangulation mesh = SphericalTriangulation::refined_octants(1);
  const AngularBasis sphere_hat = AngularBasis::hat(mesh);
  Eigen::VectorXd values;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    std::mt19937 tri_rng(100 + t);
    std::uniform_real_distribution<double> unit(0.1, 0.9);
    const SphericalTriangle tri = mesh.triangle(t);
    const Vec3 inside =
        project_to_sphere(unit(tri_rng) * tri.a + unit(tri_rng) * tri.b + unit(tri_rng) * tri.c);
    sphere_hat.evaluate_in_element(t, inside, values);
    const auto& tv = mesh.triangle_vertices(t);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      const bool incident = v == tv[0] || v == tv[1] || v == tv[2];
      if (!incident) CHECK(values[v] == 0.0);
    }
  }
}

TEST_CASE("hat span contains constants and the linear function") {
  const Partition1D partition = Partition1D::equidistant(6);
  const AngularBasis hat = AngularBasis::hat(partition);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(hat.dimension());
  Eigen::VectorXd nodes(hat.dimension());
  for (int i = 0; i < hat.dimension(); ++i) nodes[i] = partition.node(i);
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double mu = dist(rng);
    const Eigen::VectorXd values = hat.evaluate(mu);
    CHECK(values.dot(ones) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(values.dot(nodes) == doctest::Approx(mu).epsilon(1e-12));
  }
}

TEST_CASE("real spherical harmonics") {
  SUBCASE("constant mode") {
    const Eigen::VectorXd values = real_spherical_harmonics(0, Vec3(0, 0, 1));
    CHECK(values.size() == 1);
    CHECK(values[0] == doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-14));
  }

  SUBCASE("component count") {
    std::mt19937 rng(41);
    CHECK(real_spherical_harmonics(2, random_direction(rng)).size() == 9);
  }

  SUBCASE("orthonormality under a fine quadrature") {
    const int order = 3;
    const SphereRule rule = mesh_rule(SphericalTriangulation::refined_octants(2),
                                      std::max(18, 2 * order + 2));
    const int n = (order + 1) * (order + 1);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    for (const auto& elem : rule.elements)
      for (std::size_t i = 0; i < elem.nodes.size(); ++i) {
        const Eigen::VectorXd y = real_spherical_harmonics(order, elem.nodes[i]);
        gram.noalias() += elem.weights[i] * y * y.transpose();
      }
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() < 1e-10);
  }

  SUBCASE("degree one matches the Cartesian components") {
    std::mt19937 rng(43);
    const double scale = std::sqrt(3.0 / (4.0 * M_PI));
    for (int i = 0; i < 50; ++i) {
      const Vec3 omega = random_direction(rng);
      const Eigen::VectorXd y = real_spherical_harmonics(1, omega);
      CHECK(y[1] == doctest::Approx(scale * omega[1]).epsilon(1e-12));  // m=-1: sin phi
      CHECK(y[2] == doctest::Approx(scale * omega[2]).epsilon(1e-12));  // m=0:  z
      CHECK(y[3] == doctest::Approx(scale * omega[0]).epsilon(1e-12));  // m=+1: cos phi
    }
  }
}

TEST_CASE("isotropic moments") {
  CHECK((isotropic_moment(AngularBasis::legendre(2)) - Eigen::Vector3d(2, 0, 0)).norm() == 0.0);

  const Eigen::VectorXd monomial = isotropic_moment(AngularBasis::monomial(4));
  CHECK(monomial[0] == 2.0);
  CHECK(monomial[1] == 0.0);
  CHECK(monomial[2] == doctest::Approx(2.0 / 3.0));
  CHECK(monomial[4] == doctest::Approx(2.0 / 5.0));

  const Eigen::VectorXd hat = isotropic_moment(AngularBasis::hat(Partition1D::equidistant(2)));
  CHECK(hat[0] == doctest::Approx(0.5));
  CHECK(hat[1] == doctest::Approx(1.0));
  CHECK(hat[2] == doctest::Approx(0.5));

  const Eigen::VectorXd pm3d =
      isotropic_moment(AngularBasis::partial_moments(SphericalTriangulation::octants()));
  for (int t = 0; t < 8; ++t) CHECK(pm3d[4 * t] == doctest::Approx(M_PI / 2.0).epsilon(1e-13));

  // Hat functions on the sphere: partition of unity makes the components
  // sum to the sphere area.
  const Eigen::VectorXd hat3d =
      isotropic_moment(AngularBasis::hat(SphericalTriangulation::refined_octants(1)));
  CHECK(hat3d.sum() == doctest::Approx(4.0 * M_PI).epsilon(1e-9));
  CHECK(hat3d.minCoeff() > 0.0);

  const Eigen::VectorXd sh = isotropic_moment(AngularBasis::spherical_harmonics(2));
  CHECK(sh[0] == doctest::Approx(std::sqrt(4.0 * M_PI)));
  CHECK(sh.tail(8).norm() == 0.0);
}

TEST_CASE("particle density from moments") {
  const AngularBasis hat = AngularBasis::hat(Partition1D::equidistant(2));
  CHECK(particle_density(isotropic_moment(hat), hat) == doctest::Approx(2.0));
  const AngularBasis sh = AngularBasis::spherical_harmonics(1);
  CHECK(particle_density(isotropic_moment(sh), sh) == doctest::Approx(4.0 * M_PI));
  const AngularBasis pm = AngularBasis::partial_moments(Partition1D::equidistant(3));
  CHECK(particle_density(isotropic_moment(pm), pm) == doctest::Approx(2.0));
}

TEST_CASE("span change of basis") {
  const AngularBasis full1 = AngularBasis::monomial(1);
  const AngularBasis hat2 = AngularBasis::hat(Partition1D::equidistant(1));

  SUBCASE("first-order full moments against the two-interval hat basis") {
    const auto t = span_change_of_basis(full1, hat2);
    REQUIRE(t.has_value());
    Eigen::MatrixXd expected(2, 2);
    expected << 1, 1, -1, 1;
    CHECK((*t - expected).norm() == 0.0);
    // b_from(mu) = T b_to(mu) at sample points.
    for (double mu : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
      const Eigen::VectorXd lhs = full1.evaluate(mu);
      const Eigen::VectorXd rhs = *t * hat2.evaluate(mu);
      CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }

  SUBCASE("identity pair") {
    const auto t = span_change_of_basis(hat2, hat2);
    REQUIRE(t.has_value());
    CHECK((*t - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
  }

  SUBCASE("unsupported pairs fail") {
    CHECK_FALSE(span_change_of_basis(AngularBasis::monomial(2), hat2).has_value());
    CHECK_FALSE(span_change_of_basis(full1, AngularBasis::hat(Partition1D::equidistant(3)))
                    .has_value());
  }

  SUBCASE("first-order mixed moments against the three-interval hat basis") {
    const AngularBasis hat3 = AngularBasis::hat(Partition1D::equidistant(2));
    const auto t = span_change_of_basis(MixedMomentBasis1{}, hat3);
    REQUIRE(t.has_value());
    Eigen::MatrixXd expected(3, 3);
    expected << 1, 1, 1, 0, 0, 1, -1, 0, 0;
    CHECK((*t - expected).norm() == 0.0);
    // Directly coded mixed-moment basis as the oracle.
    auto mixed = [](double mu) {
      return Eigen::Vector3d(1.0, mu >= 0.0 ? mu : 0.0, mu <= 0.0 ? mu : 0.0);
    };
    for (double mu : {-1.0, -0.4, 0.0, 0.6, 1.0}) {
      const Eigen::VectorXd rhs = *t * hat3.evaluate(mu);
      CHECK((mixed(mu) - rhs).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    CHECK_FALSE(span_change_of_basis(MixedMomentBasis1{}, hat2).has_value());
  }
}
