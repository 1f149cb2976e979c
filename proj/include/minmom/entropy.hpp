// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "minmom/basis.hpp"
#include "minmom/quadrature.hpp"

namespace minmom {

enum class EntropyKind { MaxwellBoltzmann, BoseEinstein, Quadratic };

std::string entropy_name(EntropyKind kind);

/// Kinetic entropy family through its Legendre dual: eta*(p), its first two
/// derivatives, and the dual-variable domain. Maxwell-Boltzmann has
/// eta* = eta*' = exp; Bose-Einstein requires p < 0; the quadratic entropy
/// yields the linear ansatz eta*'(p) = p.
struct EntropyFamily {
  EntropyKind kind = EntropyKind::MaxwellBoltzmann;

  double dual(double p) const;
  double dual_prime(double p) const;
  double dual_second(double p) const;
  bool in_domain(double p) const;
  /// p with eta*'(p) = c, for constant-density multipliers (c > 0).
  double multiplier_for_constant(double c) const;
};

/// Thrown by term evaluation when the dual variable leaves the entropy
/// domain at a quadrature node (Bose-Einstein only).
struct DomainError : std::runtime_error {
  DomainError(std::string msg, int element, int node)
      : std::runtime_error(std::move(msg)), element(element), node(node) {}
  int element;
  int node;
};

enum class SolveStatus { Converged, MaxIterations, DomainViolation, SingularHessian };

std::string to_string(SolveStatus status);

struct SolverConfig {
  double tol = 1e-9;               // on the gradient max-norm, scaled by rho(u)
  int max_iter = 200;
  double armijo_slope = 1e-4;
  double step_shrink = 0.5;
  double min_step = 1e-13;
  double taylor_threshold = 1e-4;  // switch point of the series branches
};

struct ClosureResult {
  Eigen::VectorXd multipliers;
  Eigen::VectorXd achieved_moments;
  double residual_norm = 0.0;  // max-norm moment defect divided by rho(u)
  int iterations = 0;
  std::int64_t wall_time_ns = 0;
  SolveStatus status = SolveStatus::Converged;
  std::vector<double> objective_history;
  std::string message;

  bool converged() const { return status == SolveStatus::Converged; }
};

/// The strictly convex dual of the entropy minimization for a fixed basis,
/// quadrature and entropy: objective <eta*(b^T a)> - u^T a, gradient
/// <b eta*'(b^T a)> - u, Hessian <b b^T eta*''(b^T a)>. Quadrature nodes and
/// basis values are cached at construction; all evaluations are const and
/// thread-safe.
class DualProblem {
 public:
  DualProblem(AngularBasis basis, const Rule1D& rule, EntropyFamily entropy);
  DualProblem(AngularBasis basis, const SphereRule& rule, EntropyFamily entropy);
  ~DualProblem();
  DualProblem(DualProblem&&) noexcept;

  const AngularBasis& basis() const;
  EntropyFamily entropy() const;
  int dimension() const;
  double domain_measure() const;
  std::size_t node_count() const;

  struct Terms {
    double objective;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
  };

  /// Objective, gradient and dense Hessian at the multipliers. Throws
  /// DomainError if the dual variable leaves the entropy domain at a node.
  Terms dual_terms(const Eigen::VectorXd& u, const Eigen::VectorXd& alpha) const;

  /// Objective alone; +infinity on domain violations or overflow (used by
  /// the line search as a rejection signal).
  double objective(const Eigen::VectorXd& u, const Eigen::VectorXd& alpha) const;

  /// Quadrature moments <b eta*'(b^T alpha)> of the ansatz.
  Eigen::VectorXd moments(const Eigen::VectorXd& alpha) const;

 private:
  friend class ClosureSolver;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Backtracking Newton solver for the dual problem, started from the
/// multipliers of the isotropic moment with matching density. Maxwell-
/// Boltzmann solves are run on u/rho(u) and shifted back afterwards. The
/// Hessian is factorized in the sparsity pattern natural to the basis
/// (tridiagonal for 1D hat functions, block-diagonal for partial moments,
/// dense otherwise).
class ClosureSolver {
 public:
  ClosureSolver(AngularBasis basis, const Rule1D& rule, EntropyFamily entropy,
                SolverConfig config = {});
  ClosureSolver(AngularBasis basis, const SphereRule& rule, EntropyFamily entropy,
                SolverConfig config = {});

  ClosureResult solve(const Eigen::VectorXd& u) const;

  const DualProblem& problem() const { return problem_; }
  const SolverConfig& config() const { return config_; }

 private:
  DualProblem problem_;
  SolverConfig config_;
};

/// Ansatz density eta*'(b(point)^T alpha). Boundary points of discontinuous
/// families use the lowest-index element's continuous extension.
double evaluate_ansatz(const AngularBasis& basis, const EntropyFamily& entropy,
                       const Eigen::VectorXd& alpha, double mu);
double evaluate_ansatz(const AngularBasis& basis, const EntropyFamily& entropy,
                       const Eigen::VectorXd& alpha, const Vec3& omega);
double evaluate_ansatz_in_element(const AngularBasis& basis, const EntropyFamily& entropy,
                                  const Eigen::VectorXd& alpha, int element, double mu);
double evaluate_ansatz_in_element(const AngularBasis& basis, const EntropyFamily& entropy,
                                  const Eigen::VectorXd& alpha, int element, const Vec3& omega);

/// Closed-form Maxwell-Boltzmann moments of exp(sum_i h_i alpha_i) on the
/// hat-function basis. Multiplier differences smaller than the threshold use
/// the truncated-series branch of the interval kernel.
Eigen::VectorXd analytic_hat_moments(const Partition1D& partition, const Eigen::VectorXd& alpha,
                                     double taylor_threshold = 1e-4);

/// Same interval kernel split into the two one-sided contributions; exposed
/// for cross-checking the series branch against the closed form.
double hat_interval_kernel(double delta, double taylor_threshold);
double hat_interval_kernel_closed(double delta);
double hat_interval_kernel_series(double delta);

/// Closed-form Maxwell-Boltzmann moments of exp(a_{j,0} + a_{j,1} mu) per
/// interval for the 1D partial-moment basis.
Eigen::VectorXd analytic_pm_moments_1d(const Partition1D& partition, const Eigen::VectorXd& alpha,
                                       double taylor_threshold = 1e-4);

/// Gram matrix M_ij = <b_i b_j> under the given rule.
Eigen::MatrixXd mass_matrix(const AngularBasis& basis, const Rule1D& rule);
Eigen::MatrixXd mass_matrix(const AngularBasis& basis, const SphereRule& rule);

/// Multipliers of the quadratic-entropy (linear) closure, alpha = M^{-1} u.
/// Throws on a singular mass matrix.
Eigen::VectorXd linear_closure(const AngularBasis& basis, const Eigen::VectorXd& u,
                               const Eigen::MatrixXd& mass);

}  // namespace minmom
