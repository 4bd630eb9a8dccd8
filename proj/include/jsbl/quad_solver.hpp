#pragma once

#include <functional>
#include <optional>

#include "jsbl/model.hpp"

namespace jsbl {

/// min_x |F x - y|^2 + |W^{1/2} R x|^2 with W = diag(weights). The weights are
/// 1/theta for IAS and theta for GSBL.
struct QuadraticSubproblem {
  LinearMap forward;
  Vector data;
  LinearMap sparsifier;
  Vector weights;
};

struct QuadraticSolution {
  Vector x;
  int iterations = 0;
  /// |A x - b| / |b| (absolute when b = 0).
  double relative_residual = 0.0;
  /// PCG ran out of iterations; x is the last iterate.
  bool budget_exhausted = false;
};

struct PcgResult {
  Vector x;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

using OperatorAction = std::function<Vector(const Vector&)>;

/// Preconditioned conjugate gradients with a diagonal preconditioner.
/// Stops when |b - A x| <= tol |b| (tol when b = 0) or after maxit steps.
PcgResult pcg(const OperatorAction& apply_A, const Vector& b, const Vector& precond, double tol,
              int maxit, const Vector* x0 = nullptr);

/// Normal-equation solver for one (F, y, R) triple. Caches what does not
/// depend on the weights (F^T y, and F^T F for the direct path) so repeated
/// solves inside an outer loop only pay for the reweighting.
class NormalEquationSolver {
 public:
  NormalEquationSolver(LinearMap forward, Vector data, LinearMap sparsifier, const SolverConfig& cfg);

  /// Solves (F^T F + R^T W R) x = F^T y. `warm_start` seeds PCG.
  QuadraticSolution solve(const Vector& weights, const Vector* warm_start = nullptr) const;

  bool uses_direct() const { return direct_; }
  const Vector& rhs() const { return rhs_; }

 private:
  QuadraticSolution solve_direct(const Vector& weights) const;
  QuadraticSolution solve_pcg(const Vector& weights, const Vector* warm_start) const;
  Vector apply_normal(const Vector& weights, const Vector& x) const;

  LinearMap forward_;
  LinearMap sparsifier_;
  Vector rhs_;
  double inner_tol_;
  int inner_maxit_;
  bool direct_;
  Matrix gram_;                  // F^T F, direct path only
  std::optional<Matrix> r_dense_;  // R when it is not sparse
  Vector forward_diag_;           // diag(F^T F)
};

QuadraticSolution solve_quadratic(const QuadraticSubproblem& sub, const SolverConfig& cfg);

/// True iff ker(F) and ker(R) intersect only in 0, i.e. [F; R] has full
/// column rank (singular values above N * eps * sigma_max).
bool check_common_kernel(const LinearMap& forward, const LinearMap& sparsifier);

}  // namespace jsbl
