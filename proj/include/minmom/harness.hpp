// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minmom/basis.hpp"
#include "minmom/densities.hpp"
#include "minmom/entropy.hpp"
#include "minmom/quadrature.hpp"

namespace minmom {

/// Model families: full moments, hat functions and partial moments, each in
/// a minimum-entropy (M) and a linear (P) variant.
enum class ModelFamily { M, P, HFM, HFP, PMM, PMP };

/// Model descriptor. Full-moment families carry the polynomial order (the
/// paper-style name suffix); piecewise families carry the basis dimension.
struct ModelSpec {
  ModelFamily family;
  int size;  // order N for M/P, dimension n for HFM/HFP/PMM/PMP
};

bool is_linear_family(ModelFamily family);
std::string model_name(const ModelSpec& spec);
ModelSpec parse_model_name(const std::string& name);

/// Basis for a model in the given geometry. Full moments become Legendre
/// polynomials in the slab and real spherical harmonics on the sphere;
/// piecewise families use equidistant partitions / octant refinements whose
/// dimension must match the requested size.
AngularBasis make_model_basis(const ModelSpec& spec, Geometry geometry);

/// Desk-scale model ladders used by the studies.
std::vector<ModelSpec> default_models(ModelFamily family, Geometry geometry);
std::vector<ModelSpec> parse_model_list(const std::string& list, Geometry geometry);

/// Quadrature resolution of the reference integrals: per-model composite
/// Gauss-Lobatto in the slab (at least `min_subintervals` subintervals of
/// `points_1d` points), and a `degree_sphere`-exact rule on the level-
/// `sphere_level` refinement on the sphere.
struct QuadratureOptions {
  int points_1d = 20;
  int min_subintervals = 200;
  int degree_sphere = 18;
  int sphere_level = 3;
};

Rule1D reference_rule_1d(const AngularBasis& basis, const TestDensity* density,
                         const QuadratureOptions& quad);
SphereRule reference_rule_sphere(const AngularBasis& basis, const QuadratureOptions& quad);

/// Moments of a prescribed density against the basis on the reference rule.
MomentVector reference_moments(const TestDensity& density, const AngularBasis& basis,
                               const QuadratureOptions& quad = {});

struct ErrorNorms {
  double l1 = 0.0;
  double linf = 0.0;
};

/// L1 (quadrature) and max-norm (nodes plus element midpoints) distance
/// between the ansatz of the multipliers and a reference density. The slab
/// reference takes (mu, hint) with hint inside the evaluation element.
ErrorNorms approximation_error(const std::function<double(double, double)>& psi_ref,
                               const AngularBasis& basis, const EntropyFamily& entropy,
                               const Eigen::VectorXd& alpha, const Rule1D& rule);
ErrorNorms approximation_error(const std::function<double(const Vec3&)>& psi_ref,
                               const AngularBasis& basis, const EntropyFamily& entropy,
                               const Eigen::VectorXd& alpha, const SphereRule& rule);

/// One study row: a solved model with its approximation errors.
struct ExperimentRow {
  std::string model;
  int n = 0;  // basis dimension
  std::string entropy;
  double l1 = 0.0;
  double linf = 0.0;
  int iterations = 0;
  std::int64_t time_ns = 0;
  std::optional<double> order;  // L1 order against the previous row of the family
  SolveStatus status = SolveStatus::Converged;
};

struct StudyConfig {
  TestDensity density = TestDensity::gauss_1d();
  std::vector<ModelSpec> models;
  EntropyKind entropy = EntropyKind::MaxwellBoltzmann;  // for the minimum-entropy families
  SolverConfig solver;
  QuadratureOptions quad;
  int threads = 1;
};

/// Solve one model against a density and return its errors. The closure
/// result of the solve is exposed for callers that need multipliers or
/// timings; linear models report zero iterations.
struct ModelRun {
  ExperimentRow row;
  Eigen::VectorXd multipliers;
  MomentVector moments;
};
ModelRun run_model(const TestDensity& density, const ModelSpec& spec, EntropyKind entropy,
                   const SolverConfig& solver, const QuadratureOptions& quad);

/// All (model, n) rows of a study, sorted by model family then dimension,
/// with empirical orders -log(e2/e1)/log(n2/n1) between consecutive rows.
/// Solver failures are recorded in-row and the study continues.
std::vector<ExperimentRow> convergence_study(const StudyConfig& config);

struct BenchConfig {
  TestDensity density = TestDensity::crossing_beams_1d();
  std::vector<ModelSpec> models;
  EntropyKind entropy = EntropyKind::MaxwellBoltzmann;
  SolverConfig solver;
  QuadratureOptions quad;
  int repetitions = 20;
  int warmup = 3;
};

/// Median solve time over the repetitions, after warm-up solves; strictly
/// sequential. Reference-moment computation is excluded from the timings.
std::vector<ExperimentRow> timing_benchmark(const BenchConfig& config);

/// CSV with header model,n,entropy,l1,linf,iterations,time_ns,order and
/// RFC-4180 quoting. Order is empty when undefined.
void emit_csv(const std::vector<ExperimentRow>& rows, std::ostream& os);
void emit_csv(const std::vector<ExperimentRow>& rows, const std::string& path);
std::vector<ExperimentRow> parse_csv(std::istream& is);

/// Flat key=value configuration files (lines starting with # are comments).
std::map<std::string, std::string> parse_config_file(std::istream& is);

/// Mean of the consecutive empirical orders of the rows of one family,
/// computed from the given error column.
double mean_order(const std::vector<ExperimentRow>& rows, bool use_linf = false);

}  // namespace minmom
