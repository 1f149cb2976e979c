// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "minmom/basis.hpp"
#include "minmom/quadrature.hpp"

using namespace minmom;

namespace {

// Analytic monomial integrals over [-1,1].
double monomial_integral(int degree) { return degree % 2 == 0 ? 2.0 / (degree + 1.0) : 0.0; }

double apply(const GaussRule& rule, int degree) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * std::pow(rule.nodes[i], degree);
  return sum;
}

}  // namespace

TEST_CASE("Gauss-Lobatto endpoints and low-order values") {
  const GaussRule two = gauss_lobatto(2);
  CHECK(two.nodes == std::vector<double>{-1.0, 1.0});
  CHECK(two.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

  const GaussRule three = gauss_lobatto(3);
  CHECK(three.nodes[0] == -1.0);
  CHECK(three.nodes[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(three.nodes[2] == 1.0);
  CHECK(three.weights[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(three.weights[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(three.weights[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  CHECK_THROWS_AS(gauss_lobatto(1), std::invalid_argument);
}

TEST_CASE("Gauss-Lobatto monomial exactness through degree 2p-3") {
  for (int points : {2, 3, 4, 5, 6, 8, 12, 20}) {
    const GaussRule rule = gauss_lobatto(points);
    for (int degree = 0; degree <= 2 * points - 3; ++degree)
      CHECK(apply(rule, degree) == doctest::Approx(monomial_integral(degree)).epsilon(1e-13));
    for (double w : rule.weights) CHECK(w > 0.0);
  }
}

TEST_CASE("Gauss-Legendre monomial exactness through degree 2p-1") {
  for (int points : {1, 2, 3, 5, 10}) {
    const GaussRule rule = gauss_legendre(points);
    for (int degree = 0; degree <= 2 * points - 1; ++degree)
      CHECK(apply(rule, degree) == doctest::Approx(monomial_integral(degree)).epsilon(1e-13));
  }
}

TEST_CASE("composite Lobatto rule on a partition") {
  const Partition1D partition = Partition1D::equidistant(2);
  const Rule1D rule = composite_lobatto(partition, 3);
  CHECK(rule.node_count() == 6);
  CHECK(rule.weight_sum() == doctest::Approx(2.0).epsilon(1e-15));
  // The shared node 0 appears once per side with its own parent.
  CHECK(rule.elements[0].nodes.back() == 0.0);
  CHECK(rule.elements[1].nodes.front() == 0.0);
  CHECK(rule.elements[0].parent == 0);
  CHECK(rule.elements[1].parent == 1);
  CHECK(rule.includes_partition_nodes(partition));

  // Integrates the hat basis exactly: matches the analytic isotropic moment.
  const AngularBasis hat = AngularBasis::hat(partition);
  const Eigen::VectorXd via_quad =
      integrate_vector(rule, hat.dimension(), [&](int parent, double mu, Eigen::VectorXd& out) {
        hat.evaluate_in_element(parent, mu, out);
      });
  const Eigen::VectorXd analytic = isotropic_moment(hat);
  CHECK((via_quad - analytic).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("fine rule subdivision and breakpoints") {
  const Partition1D partition = Partition1D::equidistant(3);
  const Rule1D rule = fine_rule(partition, 200, 20);
  CHECK(rule.elements.size() >= 200);
  CHECK(rule.weight_sum() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rule.includes_partition_nodes(partition));

  // A breakpoint strictly inside an interval becomes an element boundary.
  const Rule1D split = fine_rule(partition, 6, 4, {0.1});
  bool found = false;
  for (const auto& e : split.elements)
    if (e.lo == 0.1 || e.hi == 0.1) found = true;
  CHECK(found);
}

TEST_CASE("integrate on 1D rules") {
  const Partition1D partition = Partition1D::equidistant(4);
  const Rule1D rule = composite_lobatto(partition, 8);

  CHECK(integrate(rule, [](int, double) { return 1.0; }) == doctest::Approx(2.0).epsilon(1e-14));

  const AngularBasis legendre = AngularBasis::legendre(4);
  const Eigen::VectorXd integrals = integrate_vector(
      rule, 5, [&](int, double mu, Eigen::VectorXd& out) { legendre.evaluate(mu, out); });
  CHECK(integrals[0] == doctest::Approx(2.0).epsilon(1e-13));
  for (int i = 1; i < 5; ++i) CHECK(std::abs(integrals[i]) < 1e-13);

  // Hat basis against exp(mu), checked against the closed antiderivative of
  // (a + b mu) e^mu.
  const AngularBasis hat = AngularBasis::hat(partition);
  const Eigen::VectorXd weighted =
      integrate_vector(rule, hat.dimension(), [&](int parent, double mu, Eigen::VectorXd& out) {
        hat.evaluate_in_element(parent, mu, out);
        out *= std::exp(mu);
      });
  auto affine_exp_integral = [](double a, double b, double lo, double hi) {
    auto anti = [&](double x) { return (a + b * x - b) * std::exp(x); };
    return anti(hi) - anti(lo);
  };
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(hat.dimension());
  for (int j = 0; j < partition.intervals(); ++j) {
    const double lo = partition.left(j), hi = partition.right(j), len = hi - lo;
    // Rising hat on [lo,hi]: (mu - lo)/len; falling hat: (hi - mu)/len.
    expected[j + 1] += affine_exp_integral(-lo / len, 1.0 / len, lo, hi);
    expected[j] += affine_exp_integral(hi / len, -1.0 / len, lo, hi);
  }
  CHECK((weighted - expected).lpNorm<Eigen::Infinity>() < 1e-12);

  // Evaluation failures surface with element and node identification.
  CHECK_THROWS_WITH_AS(
      integrate_vector(rule, 1,
                       [&](int, double, Eigen::VectorXd&) { throw std::runtime_error("boom"); }),
      doctest::Contains("element 0, node 0"), std::runtime_error);
}

TEST_CASE("flat triangle rule is symmetric, positive and degree-exact") {
  for (int degree : {2, 5, 10, 18}) {
    const TriangleRule rule = flat_triangle_rule(degree);
    double sum = 0.0;
    for (double f : rule.fractions) {
      CHECK(f > 0.0);
      sum += f;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));

    // Exactness of barycentric monomials lambda0^p lambda1^q on the
    // reference triangle: integral = 2 area p! q! / (p+q+2)!.
    for (int p = 0; p + 0 <= degree; ++p)
      for (int q = 0; p + q <= degree; ++q) {
        double value = 0.0;
        for (std::size_t i = 0; i < rule.barycentric.size(); ++i)
          value += rule.fractions[i] * std::pow(rule.barycentric[i][1], p) *
                   std::pow(rule.barycentric[i][2], q);
        double expected = 2.0;  // of the area fraction: 2 p! q! / (p+q+2)!
        for (int m = 1; m <= p; ++m) expected *= m;
        for (int m = 1; m <= q; ++m) expected *= m;
        for (int m = 1; m <= p + q + 2; ++m) expected /= m;
        CHECK(value == doctest::Approx(expected).epsilon(1e-12));
      }
  }
}

TEST_CASE("spherical triangle rules") {
  const SphericalTriangulation octants = SphericalTriangulation::octants();

  SUBCASE("weight sum equals the spherical area") {
    const auto element = spherical_triangle_rule(octants.triangle(0), 18);
    double sum = 0.0;
    for (double w : element.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(M_PI / 2.0).epsilon(1e-10));
    for (const auto& node : element.nodes) CHECK(std::abs(node.norm() - 1.0) < 1e-14);
  }

  SUBCASE("constant over the whole sphere") {
    const SphereRule rule = mesh_rule(octants, 14);
    CHECK(rule.weight_sum() == doctest::Approx(4.0 * M_PI).epsilon(1e-10));
    CHECK(integrate(rule, [](int, const Vec3&) { return 1.0; }) ==
          doctest::Approx(4.0 * M_PI).epsilon(1e-10));
  }

  SUBCASE("second moment of Omega_z over the sphere") {
    const SphereRule rule = mesh_rule(octants, 18);
    const double value = integrate(rule, [](int, const Vec3& o) { return o[2] * o[2]; });
    CHECK(value == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-10));
  }

  SUBCASE("self-convergence on a smooth integrand at degree >= 18") {
    const SphericalTriangulation mesh = SphericalTriangulation::refined_octants(1);
    auto smooth = [](int, const Vec3& o) { return std::exp(o[0] + 0.5 * o[1] - 0.2 * o[2]); };
    const double coarse = integrate(mesh_rule(mesh, 18), smooth);
    const double fine = integrate(mesh_rule(mesh, 24), smooth);
    CHECK(std::abs(coarse - fine) < 1e-10);
  }

  SUBCASE("subdivided rules group nodes by model triangle") {
    const SphereRule rule = mesh_rule_subdivided(octants, 2, 6);
    CHECK(rule.elements.size() == 128);  // 8 octants, 16 descendants each
    for (std::size_t e = 0; e < rule.elements.size(); ++e)
      CHECK(rule.elements[e].parent == static_cast<int>(e) / 16);
    CHECK(rule.weight_sum() == doctest::Approx(4.0 * M_PI).epsilon(1e-10));
  }
}
