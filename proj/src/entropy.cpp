// SPDX-FileCopyrightText: The minmom authors
// SPDX-License-Identifier: Apache-2.0

#include "minmom/entropy.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace minmom {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBeDomainMargin = 1e-12;  // dual variable must stay below -margin
}  // namespace

std::string entropy_name(EntropyKind kind) {
  switch (kind) {
    case EntropyKind::MaxwellBoltzmann: return "mb";
    case EntropyKind::BoseEinstein: return "be";
    case EntropyKind::Quadratic: return "quadratic";
  }
  return "?";
}

double EntropyFamily::dual(double p) const {
  switch (kind) {
    case EntropyKind::MaxwellBoltzmann: return std::exp(p);
    case EntropyKind::BoseEinstein: return -std::log(-std::expm1(p));
    case EntropyKind::Quadratic: return 0.5 * p * p;
  }
  return 0.0;
}

double EntropyFamily::dual_prime(double p) const {
  switch (kind) {
    case EntropyKind::MaxwellBoltzmann: return std::exp(p);
    case EntropyKind::BoseEinstein: return 1.0 / std::expm1(-p);
    case EntropyKind::Quadratic: return p;
  }
  return 0.0;
}

double EntropyFamily::dual_second(double p) const {
  switch (kind) {
    case EntropyKind::MaxwellBoltzmann: return std::exp(p);
    case EntropyKind::BoseEinstein: {
      const double e = std::expm1(-p);
      return std::exp(-p) / (e * e);
    }
    case EntropyKind::Quadratic: return 1.0;
  }
  return 0.0;
}

bool EntropyFamily::in_domain(double p) const {
  if (kind == EntropyKind::BoseEinstein) return p < -kBeDomainMargin;
  return std::isfinite(p);
}

double EntropyFamily::multiplier_for_constant(double c) const {
  switch (kind) {
    case EntropyKind::MaxwellBoltzmann: return std::log(c);
    case EntropyKind::BoseEinstein: return std::log(c / (1.0 + c));
    case EntropyKind::Quadratic: return c;
  }
  return 0.0;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::DomainViolation: return "domain-violation";
    case SolveStatus::SingularHessian: return "singular-hessian";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Dual problem internals

namespace {

enum class HessStructure { Dense, Tridiagonal, Block2, Block4 };

HessStructure structure_for(const AngularBasis& basis) {
  switch (basis.family()) {
    case BasisFamily::HatFunctions1D: return HessStructure::Tridiagonal;
    case BasisFamily::PartialMoments1D: return HessStructure::Block2;
    case BasisFamily::PartialMomentsSphere: return HessStructure::Block4;
    default: return HessStructure::Dense;
  }
}

// Basis values at one quadrature node for the locally supported families.
struct LocalNode {
  double w;
  int count;
  int idx[4];
  double val[4];
};

struct Hessian {
  HessStructure structure;
  int n = 0;
  Eigen::MatrixXd dense;
  Eigen::VectorXd diag, off;                 // tridiagonal
  std::vector<Eigen::Matrix2d> blocks2;
  std::vector<Eigen::Matrix4d> blocks4;

  void init(HessStructure s, int dim) {
    structure = s;
    n = dim;
    switch (s) {
      case HessStructure::Dense: dense.setZero(n, n); break;
      case HessStructure::Tridiagonal:
        diag.setZero(n);
        off.setZero(n - 1);
        break;
      case HessStructure::Block2: blocks2.assign(static_cast<std::size_t>(n / 2), Eigen::Matrix2d::Zero()); break;
      case HessStructure::Block4: blocks4.assign(static_cast<std::size_t>(n / 4), Eigen::Matrix4d::Zero()); break;
    }
  }

  void clear() {
    switch (structure) {
      case HessStructure::Dense: dense.setZero(); break;
      case HessStructure::Tridiagonal:
        diag.setZero();
        off.setZero();
        break;
      case HessStructure::Block2:
        for (auto& b : blocks2) b.setZero();
        break;
      case HessStructure::Block4:
        for (auto& b : blocks4) b.setZero();
        break;
    }
  }

  double trace() const {
    switch (structure) {
      case HessStructure::Dense: return dense.trace();
      case HessStructure::Tridiagonal: return diag.sum();
      case HessStructure::Block2: {
        double t = 0.0;
        for (const auto& b : blocks2) t += b.trace();
        return t;
      }
      case HessStructure::Block4: {
        double t = 0.0;
        for (const auto& b : blocks4) t += b.trace();
        return t;
      }
    }
    return 0.0;
  }

  void add_to_diagonal(double lambda) {
    switch (structure) {
      case HessStructure::Dense: dense.diagonal().array() += lambda; break;
      case HessStructure::Tridiagonal: diag.array() += lambda; break;
      case HessStructure::Block2:
        for (auto& b : blocks2) b.diagonal().array() += lambda;
        break;
      case HessStructure::Block4:
        for (auto& b : blocks4) b.diagonal().array() += lambda;
        break;
    }
  }

  // Solve H d = rhs; false if the factorization hits a non-positive pivot.
  bool solve(const Eigen::VectorXd& rhs, Eigen::VectorXd& out) const {
    switch (structure) {
      case HessStructure::Dense: {
        Eigen::LLT<Eigen::MatrixXd> llt(dense);
        if (llt.info() != Eigen::Success) return false;
        out = llt.solve(rhs);
        return out.allFinite();
      }
      case HessStructure::Tridiagonal: {
        // LDL^T sweep for a symmetric tridiagonal matrix.
        Eigen::VectorXd d(n), l(std::max(n - 1, 0));
        d[0] = diag[0];
        if (!(d[0] > 0.0)) return false;
        for (int i = 0; i + 1 < n; ++i) {
          l[i] = off[i] / d[i];
          d[i + 1] = diag[i + 1] - l[i] * off[i];
          if (!(d[i + 1] > 0.0)) return false;
        }
        out = rhs;
        for (int i = 1; i < n; ++i) out[i] -= l[i - 1] * out[i - 1];
        for (int i = 0; i < n; ++i) out[i] /= d[i];
        for (int i = n - 2; i >= 0; --i) out[i] -= l[i] * out[i + 1];
        return out.allFinite();
      }
      case HessStructure::Block2: {
        out.resize(n);
        for (std::size_t j = 0; j < blocks2.size(); ++j) {
          Eigen::LLT<Eigen::Matrix2d> llt(blocks2[j]);
          if (llt.info() != Eigen::Success) return false;
          out.segment<2>(static_cast<int>(2 * j)) = llt.solve(rhs.segment<2>(static_cast<int>(2 * j)));
        }
        return out.allFinite();
      }
      case HessStructure::Block4: {
        out.resize(n);
        for (std::size_t j = 0; j < blocks4.size(); ++j) {
          Eigen::LLT<Eigen::Matrix4d> llt(blocks4[j]);
          if (llt.info() != Eigen::Success) return false;
          out.segment<4>(static_cast<int>(4 * j)) = llt.solve(rhs.segment<4>(static_cast<int>(4 * j)));
        }
        return out.allFinite();
      }
    }
    return false;
  }

  Eigen::MatrixXd to_dense() const {
    switch (structure) {
      case HessStructure::Dense: return dense;
      case HessStructure::Tridiagonal: {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        h.diagonal() = diag;
        for (int i = 0; i + 1 < n; ++i) {
          h(i, i + 1) = off[i];
          h(i + 1, i) = off[i];
        }
        return h;
      }
      case HessStructure::Block2: {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t j = 0; j < blocks2.size(); ++j)
          h.block<2, 2>(static_cast<int>(2 * j), static_cast<int>(2 * j)) = blocks2[j];
        return h;
      }
      case HessStructure::Block4: {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t j = 0; j < blocks4.size(); ++j)
          h.block<4, 4>(static_cast<int>(4 * j), static_cast<int>(4 * j)) = blocks4[j];
        return h;
      }
    }
    return {};
  }
};

}  // namespace

struct DualProblem::Impl {
  AngularBasis basis;
  EntropyFamily entropy;
  int n = 0;
  double measure = 0.0;
  bool dense_family = false;
  HessStructure structure = HessStructure::Dense;

  // Dense families: all basis values as an n x Q matrix.
  Eigen::MatrixXd basis_at_nodes;
  Eigen::VectorXd weights;

  // Locally supported families: per-node sparse values.
  std::vector<LocalNode> local;

  Impl(AngularBasis b, EntropyFamily e) : basis(std::move(b)), entropy(e) {
    n = basis.dimension();
    structure = structure_for(basis);
    // Piecewise families keep per-node local values; the spherical hat basis
    // still assembles into a dense Hessian (its graph is the vertex adjacency).
    dense_family = !is_piecewise(basis.family());
  }

  std::size_t node_count() const {
    return dense_family ? static_cast<std::size_t>(weights.size()) : local.size();
  }

  template <class Rule, class Point>
  void cache_nodes(const Rule& rule) {
    if (dense_family) {
      std::size_t q_total = 0;
      for (const auto& e : rule.elements) q_total += e.nodes.size();
      basis_at_nodes.resize(n, static_cast<Eigen::Index>(q_total));
      weights.resize(static_cast<Eigen::Index>(q_total));
      Eigen::VectorXd values(n);
      Eigen::Index q = 0;
      for (const auto& e : rule.elements)
        for (std::size_t i = 0; i < e.nodes.size(); ++i, ++q) {
          basis.evaluate_in_element(e.parent, e.nodes[i], values);
          basis_at_nodes.col(q) = values;
          weights[q] = e.weights[i];
          measure += e.weights[i];
        }
    } else {
      for (const auto& e : rule.elements)
        for (std::size_t i = 0; i < e.nodes.size(); ++i) {
          LocalNode node{};
          node.w = e.weights[i];
          measure += node.w;
          fill_local(e.parent, e.nodes[i], node);
          local.push_back(node);
        }
    }
  }

  void fill_local(int parent, double mu, LocalNode& node) {
    switch (basis.family()) {
      case BasisFamily::HatFunctions1D: {
        const auto& p = basis.partition();
        const double t = (mu - p.left(parent)) / p.length(parent);
        node.count = 2;
        node.idx[0] = parent;
        node.idx[1] = parent + 1;
        node.val[0] = 1.0 - t;
        node.val[1] = t;
        return;
      }
      case BasisFamily::PartialMoments1D:
        node.count = 2;
        node.idx[0] = 2 * parent;
        node.idx[1] = 2 * parent + 1;
        node.val[0] = 1.0;
        node.val[1] = mu;
        return;
      default: throw std::logic_error("slab node for a spherical basis");
    }
  }

  void fill_local(int parent, const Vec3& omega, LocalNode& node) {
    switch (basis.family()) {
      case BasisFamily::HatFunctionsSphere: {
        const auto lambda = spherical_barycentric(basis.mesh().triangle(parent), omega);
        const auto& vids = basis.mesh().triangle_vertices(parent);
        node.count = 3;
        for (int c = 0; c < 3; ++c) {
          node.idx[c] = vids[static_cast<std::size_t>(c)];
          node.val[c] = lambda[static_cast<std::size_t>(c)];
        }
        return;
      }
      case BasisFamily::PartialMomentsSphere:
        node.count = 4;
        node.idx[0] = 4 * parent;
        node.idx[1] = 4 * parent + 1;
        node.idx[2] = 4 * parent + 2;
        node.idx[3] = 4 * parent + 3;
        node.val[0] = 1.0;
        node.val[1] = omega[0];
        node.val[2] = omega[1];
        node.val[3] = omega[2];
        return;
      default: throw std::logic_error("spherical node for a slab basis");
    }
  }

  // Dual variable b^T alpha at every node.
  void dual_variable(const Eigen::VectorXd& alpha, Eigen::VectorXd& p) const {
    if (dense_family) {
      p.noalias() = basis_at_nodes.transpose() * alpha;
    } else {
      p.resize(static_cast<Eigen::Index>(local.size()));
      for (std::size_t q = 0; q < local.size(); ++q) {
        const LocalNode& node = local[q];
        double s = 0.0;
        for (int c = 0; c < node.count; ++c) s += node.val[c] * alpha[node.idx[c]];
        p[static_cast<Eigen::Index>(q)] = s;
      }
    }
  }

  // Objective value; +inf on entropy-domain violation or overflow. When
  // violated and `violation` is non-null, the first offending node is stored.
  double objective_value(const Eigen::VectorXd& u, const Eigen::VectorXd& alpha,
                         Eigen::VectorXd& p, std::ptrdiff_t* violation = nullptr) const {
    dual_variable(alpha, p);
    double sum = 0.0;
    for (Eigen::Index q = 0; q < p.size(); ++q) {
      if (!entropy.in_domain(p[q])) {
        if (violation) *violation = q;
        return kInf;
      }
      const double w = dense_family ? weights[q] : local[static_cast<std::size_t>(q)].w;
      sum += w * entropy.dual(p[q]);
    }
    const double value = sum - u.dot(alpha);
    return std::isfinite(value) ? value : kInf;
  }

  // Gradient and (optionally) Hessian at a feasible point. p must already
  // hold the dual variable.
  void gradient_hessian(const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                        Eigen::VectorXd& grad, Hessian* hess) const {
    if (dense_family) {
      Eigen::VectorXd scale_g(p.size());
      for (Eigen::Index q = 0; q < p.size(); ++q)
        scale_g[q] = weights[q] * entropy.dual_prime(p[q]);
      grad.noalias() = basis_at_nodes * scale_g;
      grad -= u;
      if (hess) {
        hess->clear();
        Eigen::VectorXd sqrt_scale(p.size());
        for (Eigen::Index q = 0; q < p.size(); ++q)
          sqrt_scale[q] = std::sqrt(weights[q] * entropy.dual_second(p[q]));
        const Eigen::MatrixXd half = basis_at_nodes * sqrt_scale.asDiagonal();
        hess->dense.setZero(n, n);
        hess->dense.selfadjointView<Eigen::Lower>().rankUpdate(half);
        hess->dense.triangularView<Eigen::Upper>() = hess->dense.transpose();
      }
    } else {
      grad = -u;
      if (hess) hess->clear();
      for (std::size_t qi = 0; qi < local.size(); ++qi) {
        const LocalNode& node = local[qi];
        const double pv = p[static_cast<Eigen::Index>(qi)];
        const double gw = node.w * entropy.dual_prime(pv);
        for (int c = 0; c < node.count; ++c) grad[node.idx[c]] += gw * node.val[c];
        if (!hess) continue;
        const double hw = node.w * entropy.dual_second(pv);
        switch (hess->structure) {
          case HessStructure::Tridiagonal:
            hess->diag[node.idx[0]] += hw * node.val[0] * node.val[0];
            hess->diag[node.idx[1]] += hw * node.val[1] * node.val[1];
            hess->off[node.idx[0]] += hw * node.val[0] * node.val[1];
            break;
          case HessStructure::Block2: {
            auto& b = hess->blocks2[static_cast<std::size_t>(node.idx[0] / 2)];
            b(0, 0) += hw * node.val[0] * node.val[0];
            b(0, 1) += hw * node.val[0] * node.val[1];
            b(1, 0) = b(0, 1);
            b(1, 1) += hw * node.val[1] * node.val[1];
            break;
          }
          case HessStructure::Block4: {
            auto& b = hess->blocks4[static_cast<std::size_t>(node.idx[0] / 4)];
            for (int r = 0; r < 4; ++r)
              for (int c = 0; c < 4; ++c) b(r, c) += hw * node.val[r] * node.val[c];
            break;
          }
          case HessStructure::Dense:
            for (int r = 0; r < node.count; ++r)
              for (int c = 0; c < node.count; ++c)
                hess->dense(node.idx[r], node.idx[c]) += hw * node.val[r] * node.val[c];
            break;
        }
      }
    }
  }

  Eigen::VectorXd quadrature_moments(const Eigen::VectorXd& alpha) const {
    Eigen::VectorXd p;
    dual_variable(alpha, p);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    if (dense_family) {
      Eigen::VectorXd scale(p.size());
      for (Eigen::Index q = 0; q < p.size(); ++q) scale[q] = weights[q] * entropy.dual_prime(p[q]);
      m.noalias() = basis_at_nodes * scale;
    } else {
      for (std::size_t qi = 0; qi < local.size(); ++qi) {
        const LocalNode& node = local[qi];
        const double gw = node.w * entropy.dual_prime(p[static_cast<Eigen::Index>(qi)]);
        for (int c = 0; c < node.count; ++c) m[node.idx[c]] += gw * node.val[c];
      }
    }
    return m;
  }
};

DualProblem::DualProblem(AngularBasis basis, const Rule1D& rule, EntropyFamily entropy)
    : impl_(std::make_unique<Impl>(std::move(basis), entropy)) {
  if (!impl_->basis.slab()) throw std::invalid_argument("1D rule for a spherical basis");
  impl_->cache_nodes<Rule1D, double>(rule);
}

DualProblem::DualProblem(AngularBasis basis, const SphereRule& rule, EntropyFamily entropy)
    : impl_(std::make_unique<Impl>(std::move(basis), entropy)) {
  if (impl_->basis.slab()) throw std::invalid_argument("sphere rule for a slab basis");
  impl_->cache_nodes<SphereRule, Vec3>(rule);
}

DualProblem::~DualProblem() = default;
DualProblem::DualProblem(DualProblem&&) noexcept = default;

const AngularBasis& DualProblem::basis() const { return impl_->basis; }
EntropyFamily DualProblem::entropy() const { return impl_->entropy; }
int DualProblem::dimension() const { return impl_->n; }
double DualProblem::domain_measure() const { return impl_->measure; }
std::size_t DualProblem::node_count() const { return impl_->node_count(); }

DualProblem::Terms DualProblem::dual_terms(const Eigen::VectorXd& u,
                                           const Eigen::VectorXd& alpha) const {
  Eigen::VectorXd p;
  std::ptrdiff_t violation = -1;
  const double objective = impl_->objective_value(u, alpha, p, &violation);
  if (violation >= 0)
    throw DomainError("dual variable outside the entropy domain", 0, static_cast<int>(violation));
  Terms terms;
  terms.objective = objective;
  Hessian hess;
  hess.init(impl_->structure, impl_->n);
  impl_->gradient_hessian(u, p, terms.gradient, &hess);
  terms.hessian = hess.to_dense();
  return terms;
}

double DualProblem::objective(const Eigen::VectorXd& u, const Eigen::VectorXd& alpha) const {
  Eigen::VectorXd p;
  return impl_->objective_value(u, alpha, p);
}

Eigen::VectorXd DualProblem::moments(const Eigen::VectorXd& alpha) const {
  return impl_->quadrature_moments(alpha);
}

// ---------------------------------------------------------------------------
// Newton solver

ClosureSolver::ClosureSolver(AngularBasis basis, const Rule1D& rule, EntropyFamily entropy,
                             SolverConfig config)
    : problem_(std::move(basis), rule, entropy), config_(config) {}

ClosureSolver::ClosureSolver(AngularBasis basis, const SphereRule& rule, EntropyFamily entropy,
                             SolverConfig config)
    : problem_(std::move(basis), rule, entropy), config_(config) {}

ClosureResult ClosureSolver::solve(const Eigen::VectorXd& u_in) const {
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&](ClosureResult result) {
    result.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    return result;
  };

  const DualProblem::Impl& impl = *problem_.impl_;
  const int n = problem_.dimension();
  if (u_in.size() != n) throw std::invalid_argument("moment vector length mismatch");

  const double rho = particle_density(u_in, impl.basis);
  ClosureResult result;
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    result.status = SolveStatus::MaxIterations;
    result.message = "non-positive particle density; dual is unbounded";
    result.multipliers = Eigen::VectorXd::Zero(n);
    result.achieved_moments = Eigen::VectorXd::Zero(n);
    result.residual_norm = kInf;
    return finish(result);
  }

  // Maxwell-Boltzmann solves run on u/rho and shift multipliers afterwards;
  // the shift direction represents the constant function in the basis.
  const bool scale = impl.entropy.kind == EntropyKind::MaxwellBoltzmann;
  const Eigen::VectorXd u = scale ? Eigen::VectorXd(u_in / rho) : u_in;
  const double tol_eff = scale ? config_.tol : config_.tol * rho;
  const Eigen::VectorXd constant_dir = constant_representation(impl.basis);

  // Initial guess: multipliers of the isotropic moment with the same density.
  const double c0 = (scale ? 1.0 : rho) / impl.measure;
  Eigen::VectorXd alpha = impl.entropy.multiplier_for_constant(c0) * constant_dir;

  Eigen::VectorXd p, grad, direction, trial;
  Hessian hess;
  hess.init(impl.structure, n);

  double objective = impl.objective_value(u, alpha, p);
  if (!std::isfinite(objective)) {
    result.status = SolveStatus::DomainViolation;
    result.message = "initial multipliers outside the entropy domain";
    result.multipliers = alpha;
    result.achieved_moments = Eigen::VectorXd::Zero(n);
    result.residual_norm = kInf;
    return finish(result);
  }
  result.objective_history.push_back(objective);

  for (int iter = 0;; ++iter) {
    impl.gradient_hessian(u, p, grad, &hess);
    if (grad.allFinite() && grad.lpNorm<Eigen::Infinity>() <= tol_eff) {
      result.status = SolveStatus::Converged;
      result.iterations = iter;
      break;
    }
    if (iter >= config_.max_iter) {
      result.status = SolveStatus::MaxIterations;
      result.message = "no convergence within the iteration budget";
      result.iterations = iter;
      break;
    }

    bool solved = grad.allFinite() && hess.solve(-grad, direction);
    if (!solved) {
      // One regularized retry with a trace-scaled diagonal shift.
      const double shift = 1e-12 * hess.trace() / n;
      hess.add_to_diagonal(shift > 0.0 ? shift : 1e-12);
      solved = grad.allFinite() && hess.solve(-grad, direction);
      if (!solved) {
        result.status = SolveStatus::SingularHessian;
        result.message = "Hessian factorization failed after regularization";
        result.iterations = iter;
        break;
      }
    }

    const double slope = grad.dot(direction);
    double step = 1.0;
    bool accepted = false;
    bool domain_blocked = false;
    while (step >= config_.min_step) {
      trial = alpha + step * direction;
      std::ptrdiff_t violation = -1;
      const double trial_objective = impl.objective_value(u, trial, p, &violation);
      if (trial_objective <= objective + config_.armijo_slope * step * slope) {
        alpha.swap(trial);
        objective = trial_objective;
        accepted = true;
        break;
      }
      domain_blocked = violation >= 0;
      step *= config_.step_shrink;
    }
    if (!accepted) {
      result.status = domain_blocked ? SolveStatus::DomainViolation : SolveStatus::MaxIterations;
      result.message = domain_blocked ? "line search blocked by the entropy domain"
                                      : "line search stalled";
      result.iterations = iter;
      break;
    }
    result.objective_history.push_back(objective);
    // p currently holds the accepted iterate's dual variable.
  }

  if (scale) alpha += std::log(rho) * constant_dir;
  result.multipliers = alpha;
  result.achieved_moments = impl.quadrature_moments(alpha);
  result.residual_norm = (result.achieved_moments - u_in).lpNorm<Eigen::Infinity>() / rho;
  if (!std::isfinite(result.residual_norm)) result.residual_norm = kInf;
  return finish(result);
}

// ---------------------------------------------------------------------------
// Ansatz evaluation

double evaluate_ansatz_in_element(const AngularBasis& basis, const EntropyFamily& entropy,
                                  const Eigen::VectorXd& alpha, int element, double mu) {
  Eigen::VectorXd b;
  basis.evaluate_in_element(element, mu, b);
  const double p = b.dot(alpha);
  if (!entropy.in_domain(p)) throw DomainError("dual variable outside the entropy domain", element, -1);
  return entropy.dual_prime(p);
}

double evaluate_ansatz_in_element(const AngularBasis& basis, const EntropyFamily& entropy,
                                  const Eigen::VectorXd& alpha, int element, const Vec3& omega) {
  Eigen::VectorXd b;
  basis.evaluate_in_element(element, omega, b);
  const double p = b.dot(alpha);
  if (!entropy.in_domain(p)) throw DomainError("dual variable outside the entropy domain", element, -1);
  return entropy.dual_prime(p);
}

double evaluate_ansatz(const AngularBasis& basis, const EntropyFamily& entropy,
                       const Eigen::VectorXd& alpha, double mu) {
  const int element = is_piecewise(basis.family()) ? basis.partition().locate(mu) : 0;
  return evaluate_ansatz_in_element(basis, entropy, alpha, element, mu);
}

double evaluate_ansatz(const AngularBasis& basis, const EntropyFamily& entropy,
                       const Eigen::VectorXd& alpha, const Vec3& omega) {
  const int element = is_piecewise(basis.family()) ? basis.mesh().locate(omega) : 0;
  return evaluate_ansatz_in_element(basis, entropy, alpha, element, omega);
}

// ---------------------------------------------------------------------------
// Closed-form moment integrals for the 1D piecewise bases

double hat_interval_kernel_closed(double delta) {
  return (std::expm1(delta) - delta) / (delta * delta);
}

double hat_interval_kernel_series(double delta) {
  // (e^d - 1 - d)/d^2 truncated after eight terms.
  static const double inv_factorial[] = {1.0 / 2,    1.0 / 6,     1.0 / 24,     1.0 / 120,
                                         1.0 / 720,  1.0 / 5040,  1.0 / 40320,  1.0 / 362880};
  double sum = 0.0, power = 1.0;
  for (double coeff : inv_factorial) {
    sum += coeff * power;
    power *= delta;
  }
  return sum;
}

double hat_interval_kernel(double delta, double taylor_threshold) {
  return std::abs(delta) < taylor_threshold ? hat_interval_kernel_series(delta)
                                            : hat_interval_kernel_closed(delta);
}

namespace {

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z (z-1) + 1)/z^2 with their series
// branches; these are the interval kernels of the partial-moment integrals.
double phi1(double z, double threshold) {
  if (std::abs(z) < threshold) {
    static const double coeff[] = {1.0,        1.0 / 2,    1.0 / 6,     1.0 / 24,
                                   1.0 / 120,  1.0 / 720,  1.0 / 5040,  1.0 / 40320};
    double sum = 0.0, power = 1.0;
    for (double c : coeff) {
      sum += c * power;
      power *= z;
    }
    return sum;
  }
  return std::expm1(z) / z;
}

double phi2(double z, double threshold) {
  if (std::abs(z) < threshold) {
    // sum_{l>=2} z^{l-2} (l-1)/l!
    static const double coeff[] = {1.0 / 2,    1.0 / 3,     1.0 / 8,      1.0 / 30,
                                   1.0 / 144,  1.0 / 840,   7.0 / 40320,  8.0 / 362880};
    double sum = 0.0, power = 1.0;
    for (double c : coeff) {
      sum += c * power;
      power *= z;
    }
    return sum;
  }
  return (std::expm1(z) * (z - 1.0) + z) / (z * z);
}

}  // namespace

Eigen::VectorXd analytic_hat_moments(const Partition1D& partition, const Eigen::VectorXd& alpha,
                                     double taylor_threshold) {
  const int k = partition.intervals();
  if (alpha.size() != k + 1) throw std::invalid_argument("multiplier length mismatch");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(k + 1);
  // Contribution of interval [mu_j, mu_{j+1}] to the component at its near
  // node i (where the hat is 1): length * e^{alpha_i} * G(alpha_far - alpha_i).
  for (int j = 0; j < k; ++j) {
    const double len = partition.length(j);
    const double a0 = alpha[j], a1 = alpha[j + 1];
    u[j] += len * std::exp(a0) * hat_interval_kernel(a1 - a0, taylor_threshold);
    u[j + 1] += len * std::exp(a1) * hat_interval_kernel(a0 - a1, taylor_threshold);
  }
  return u;
}

Eigen::VectorXd analytic_pm_moments_1d(const Partition1D& partition, const Eigen::VectorXd& alpha,
                                       double taylor_threshold) {
  const int k = partition.intervals();
  if (alpha.size() != 2 * k) throw std::invalid_argument("multiplier length mismatch");
  Eigen::VectorXd u(2 * k);
  for (int j = 0; j < k; ++j) {
    const double a = partition.left(j), len = partition.length(j);
    const double a0 = alpha[2 * j], a1 = alpha[2 * j + 1];
    const double z = a1 * len;
    const double front = std::exp(a0 + a1 * a) * len;
    const double f1 = phi1(z, taylor_threshold);
    const double f2 = phi2(z, taylor_threshold);
    u[2 * j] = front * f1;
    u[2 * j + 1] = front * (a * f1 + len * f2);
  }
  return u;
}

// ---------------------------------------------------------------------------
// Mass matrix and linear closure

namespace {

template <class Rule>
Eigen::MatrixXd mass_matrix_impl(const AngularBasis& basis, const Rule& rule) {
  // The mass matrix is the dual Hessian of the quadratic entropy, which is
  // independent of the multipliers.
  DualProblem problem(basis, rule, EntropyFamily{EntropyKind::Quadratic});
  const int n = basis.dimension();
  return problem.dual_terms(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)).hessian;
}

}  // namespace

Eigen::MatrixXd mass_matrix(const AngularBasis& basis, const Rule1D& rule) {
  return mass_matrix_impl(basis, rule);
}

Eigen::MatrixXd mass_matrix(const AngularBasis& basis, const SphereRule& rule) {
  return mass_matrix_impl(basis, rule);
}

Eigen::VectorXd linear_closure(const AngularBasis& basis, const Eigen::VectorXd& u,
                               const Eigen::MatrixXd& mass) {
  if (u.size() != basis.dimension() || mass.rows() != u.size())
    throw std::invalid_argument("dimension mismatch in linear closure");
  Eigen::LDLT<Eigen::MatrixXd> ldlt(mass);
  const Eigen::VectorXd alpha = ldlt.solve(u);
  const double defect = (mass * alpha - u).norm();
  if (!alpha.allFinite() || defect > 1e-8 * (1.0 + u.norm()))
    throw std::runtime_error("mass matrix is singular");
  return alpha;
}

}  // namespace minmom
