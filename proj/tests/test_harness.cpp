// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "minmom/harness.hpp"
#include "minmom/realizability.hpp"

using namespace minmom;

TEST_CASE("model names and parsing") {
  CHECK(model_name({ModelFamily::M, 3}) == "M_3");
  CHECK(model_name({ModelFamily::PMP, 64}) == "PMP_64");
  const ModelSpec spec = parse_model_name("HFM_17");
  CHECK(spec.family == ModelFamily::HFM);
  CHECK(spec.size == 17);
  CHECK_THROWS_AS(parse_model_name("XYZ_4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_model_name("M3"), std::invalid_argument);

  CHECK(is_linear_family(ModelFamily::P));
  CHECK(is_linear_family(ModelFamily::HFP));
  CHECK_FALSE(is_linear_family(ModelFamily::PMM));
}

TEST_CASE("model bases per geometry") {
  CHECK(make_model_basis({ModelFamily::M, 3}, Geometry::Slab).family() ==
        BasisFamily::Legendre1D);
  CHECK(make_model_basis({ModelFamily::M, 3}, Geometry::Sphere).family() ==
        BasisFamily::SphericalHarmonics);
  CHECK(make_model_basis({ModelFamily::M, 3}, Geometry::Sphere).dimension() == 16);
  CHECK(make_model_basis({ModelFamily::HFM, 9}, Geometry::Slab).partition().intervals() == 8);
  CHECK(make_model_basis({ModelFamily::HFM, 18}, Geometry::Sphere).mesh().level() == 1);
  CHECK(make_model_basis({ModelFamily::PMM, 32}, Geometry::Sphere).mesh().level() == 0);
  CHECK(make_model_basis({ModelFamily::PMM, 8}, Geometry::Slab).dimension() == 8);
  CHECK_THROWS_AS(make_model_basis({ModelFamily::HFM, 7}, Geometry::Sphere),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_model_basis({ModelFamily::PMM, 7}, Geometry::Slab), std::invalid_argument);
}

TEST_CASE("model list parsing expands families") {
  const auto models = parse_model_list("HFM,M_2", Geometry::Slab);
  REQUIRE(models.size() == 6);
  CHECK(models[0].family == ModelFamily::HFM);
  CHECK(models[0].size == 5);
  CHECK(models[4].size == 65);
  CHECK(models[5].family == ModelFamily::M);
  CHECK(models[5].size == 2);
  CHECK_THROWS_AS(parse_model_list("BOGUS", Geometry::Slab), std::invalid_argument);
}

TEST_CASE("reference moments") {
  SUBCASE("Heaviside against two partial-moment intervals is exact") {
    const AngularBasis pm = make_model_basis({ModelFamily::PMM, 4}, Geometry::Slab);
    const MomentVector u = reference_moments(TestDensity::heaviside_1d(), pm);
    CHECK(u.values[0] == doctest::Approx(5e-9).epsilon(1e-12));
    CHECK(u.values[1] == doctest::Approx(-2.5e-9).epsilon(1e-12));
    CHECK(u.values[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.values[3] == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("Gauss zeroth moment matches the error function") {
    const AngularBasis legendre = AngularBasis::legendre(0);
    const MomentVector u = reference_moments(TestDensity::gauss_1d(), legendre);
    // erf(1/(sigma sqrt(2))) with sigma = 0.5.
    CHECK(u.values[0] == doctest::Approx(std::erf(std::sqrt(2.0))).epsilon(1e-13));
  }

  SUBCASE("hat moments sum to the total mass") {
    for (const TestDensity& density :
         {TestDensity::gauss_1d(), TestDensity::heaviside_1d(), TestDensity::crossing_beams_1d()}) {
      const AngularBasis hat = make_model_basis({ModelFamily::HFM, 9}, Geometry::Slab);
      const AngularBasis legendre = AngularBasis::legendre(0);
      const MomentVector u_hat = reference_moments(density, hat);
      const MomentVector u0 = reference_moments(density, legendre);
      CHECK(u_hat.values.sum() == doctest::Approx(u0.values[0]).epsilon(1e-12));
    }
  }

  SUBCASE("spherical Gauss has unit density") {
    const AngularBasis sh = AngularBasis::spherical_harmonics(0);
    const MomentVector u = reference_moments(TestDensity::gauss_3d(), sh);
    CHECK(particle_density(u) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("representable densities are reproduced to solver accuracy") {
  // A hat-log-linear density is an exact ansatz: the closure must hit it.
  const AngularBasis hat = make_model_basis({ModelFamily::HFM, 5}, Geometry::Slab);
  Eigen::VectorXd alpha_star(5);
  alpha_star << 0.3, -0.4, 0.8, 0.1, -0.2;
  const EntropyFamily mb{EntropyKind::MaxwellBoltzmann};

  const QuadratureOptions quad;
  const Rule1D rule = reference_rule_1d(hat, nullptr, quad);
  const ClosureSolver solver(hat, rule, mb);
  const Eigen::VectorXd u = solver.problem().moments(alpha_star);
  const ClosureResult result = solver.solve(u);
  REQUIRE(result.converged());
  const auto norms = approximation_error(
      [&](double mu, double) { return evaluate_ansatz(hat, mb, alpha_star, mu); }, hat, mb,
      result.multipliers, rule);
  CHECK(norms.l1 <= 1e-8);
  CHECK(norms.linf <= 1e-8);
}

TEST_CASE("convergence study rows, orders and determinism") {
  StudyConfig config;
  config.density = TestDensity::gauss_1d();
  config.models = {{ModelFamily::HFM, 17}, {ModelFamily::HFM, 5}, {ModelFamily::HFM, 9}};
  config.threads = 2;

  const auto rows = convergence_study(config);
  REQUIRE(rows.size() == 3);
  // Sorted by dimension within the family.
  CHECK(rows[0].n == 5);
  CHECK(rows[1].n == 9);
  CHECK(rows[2].n == 17);
  CHECK_FALSE(rows[0].order.has_value());
  REQUIRE(rows[1].order.has_value());
  REQUIRE(rows[2].order.has_value());
  // Smooth density: second-order-ish convergence, strictly decreasing L1.
  CHECK(*rows[1].order > 1.0);
  CHECK(rows[1].l1 < rows[0].l1);
  CHECK(rows[2].l1 < rows[1].l1);
  for (const auto& row : rows) {
    CHECK(row.status == SolveStatus::Converged);
    CHECK(row.entropy == "mb");
    // Density is conserved by the solve within tolerance.
  }

  // Determinism: identical CSV except the time column.
  const auto rows2 = convergence_study(config);
  REQUIRE(rows2.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].model == rows2[i].model);
    CHECK(rows[i].l1 == rows2[i].l1);
    CHECK(rows[i].linf == rows2[i].linf);
    CHECK(rows[i].iterations == rows2[i].iterations);
  }
}

TEST_CASE("study records solver failures and continues") {
  StudyConfig config;
  config.density = TestDensity::gauss_1d();
  config.models = {{ModelFamily::HFM, 5}};
  config.solver.max_iter = 0;  // forces MaxIterations
  const auto rows = convergence_study(config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == SolveStatus::MaxIterations);
  CHECK(std::isnan(rows[0].l1));
}

TEST_CASE("csv output and round trip") {
  SUBCASE("empty study gives a header-only file") {
    std::stringstream stream;
    emit_csv({}, stream);
    CHECK(stream.str() == "model,n,entropy,l1,linf,iterations,time_ns,order\n");
  }

  SUBCASE("two rows make three lines and parse back identically") {
    ExperimentRow a;
    a.model = "HFM_5";
    a.n = 5;
    a.entropy = "mb";
    a.l1 = 0.12345678901234567;
    a.linf = 3.14e-7;
    a.iterations = 12;
    a.time_ns = 123456789;
    ExperimentRow b = a;
    b.model = "HFM_9";
    b.n = 9;
    b.l1 = 0.0123;
    b.order = -std::log(b.l1 / a.l1) / std::log(9.0 / 5.0);

    std::stringstream stream;
    emit_csv({a, b}, stream);
    std::string line;
    int lines = 0;
    while (std::getline(stream, line)) ++lines;
    CHECK(lines == 3);

    stream.clear();
    stream.seekg(0);
    const auto parsed = parse_csv(stream);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].model == a.model);
    CHECK(parsed[0].l1 == a.l1);
    CHECK(parsed[0].linf == a.linf);
    CHECK(parsed[0].time_ns == a.time_ns);
    CHECK_FALSE(parsed[0].order.has_value());
    REQUIRE(parsed[1].order.has_value());
    CHECK(*parsed[1].order == *b.order);
  }

  SUBCASE("fields with commas are quoted") {
    ExperimentRow row;
    row.model = "weird,name";
    row.n = 1;
    row.entropy = "mb";
    std::stringstream stream;
    emit_csv({row}, stream);
    std::string header, line;
    std::getline(stream, header);
    std::getline(stream, line);
    CHECK(line.substr(0, 12) == "\"weird,name\"");
    stream.clear();
    stream.seekg(0);
    const auto parsed = parse_csv(stream);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].model == "weird,name");
  }
}

TEST_CASE("config file parsing") {
  std::stringstream stream("density=gauss1d\nmodels = HFM,PMM # trailing comment\n"
                           "# full-line comment\n tol =1e-8\nbad line\nout=study.csv\n");
  const auto config = parse_config_file(stream);
  CHECK(config.at("density") == "gauss1d");
  CHECK(config.at("models") == "HFM,PMM");
  CHECK(config.at("tol") == "1e-8");
  CHECK(config.at("out") == "study.csv");
  CHECK(config.size() == 4);
}

TEST_CASE("timing benchmark smoke test") {
  BenchConfig config;
  config.density = TestDensity::crossing_beams_1d();
  config.models = {{ModelFamily::HFM, 8}, {ModelFamily::PMM, 8}};
  config.repetitions = 3;
  config.warmup = 1;
  config.quad.min_subintervals = 40;
  const auto rows = timing_benchmark(config);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.status == SolveStatus::Converged);
    CHECK(row.time_ns > 0);
    CHECK(row.iterations > 0);
    CHECK(std::isnan(row.l1));
  }
}

TEST_CASE("density conservation across a study") {
  StudyConfig config;
  config.density = TestDensity::gauss_1d();
  config.models = {{ModelFamily::PMM, 8}, {ModelFamily::P, 4}};
  for (const ModelSpec& spec : config.models) {
    const ModelRun run = run_model(config.density, spec, config.entropy, config.solver, config.quad);
    REQUIRE(run.row.status == SolveStatus::Converged);
    const double rho_ref = particle_density(run.moments);
    if (!is_linear_family(spec.family)) {
      // Nonlinear closure: achieved moments carry the same density.
      const AngularBasis basis = make_model_basis(spec, Geometry::Slab);
      const Rule1D rule = reference_rule_1d(basis, &config.density, config.quad);
      const ClosureSolver solver(basis, rule, EntropyFamily{EntropyKind::MaxwellBoltzmann});
      const ClosureResult result = solver.solve(run.moments.values);
      CHECK(particle_density(result.achieved_moments, basis) ==
            doctest::Approx(rho_ref).epsilon(1e-8));
    }
  }
}
