#include "jsbl/quad_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace jsbl {

PcgResult pcg(const OperatorAction& apply_A, const Vector& b, const Vector& precond, double tol,
              int maxit, const Vector* x0) {
  if (precond.size() != b.size() || !(precond.array() > 0.0).all())
    throw Error(ErrorCode::InvalidArgument, "preconditioner must be positive with length of b");
  PcgResult res;
  res.x = x0 ? *x0 : Vector::Zero(b.size());
  const double bnorm = b.norm();
  const double target = bnorm > 0.0 ? tol * bnorm : tol;
  Vector r = x0 ? Vector(b - apply_A(res.x)) : b;
  double rnorm = r.norm();
  if (rnorm <= target) {
    res.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    res.converged = true;
    return res;
  }
  Vector z = r.cwiseQuotient(precond);
  Vector p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= maxit; ++it) {
    const Vector Ap = apply_A(p);
    const double pAp = p.dot(Ap);
    if (!std::isfinite(pAp) || !std::isfinite(rz))
      throw Error(ErrorCode::NonFiniteValue, "PCG breakdown at iteration " + std::to_string(it));
    if (pAp <= 0.0) break;  // direction in the (numerical) kernel
    const double alpha = rz / pAp;
    res.x.noalias() += alpha * p;
    r.noalias() -= alpha * Ap;
    res.iterations = it;
    rnorm = r.norm();
    if (rnorm <= target) {
      res.converged = true;
      break;
    }
    z = r.cwiseQuotient(precond);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  res.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  return res;
}

NormalEquationSolver::NormalEquationSolver(LinearMap forward, Vector data, LinearMap sparsifier,
                                           const SolverConfig& cfg)
    : forward_(std::move(forward)),
      sparsifier_(std::move(sparsifier)),
      inner_tol_(cfg.inner_tol),
      inner_maxit_(cfg.inner_maxit) {
  if (forward_.cols() != sparsifier_.cols() || data.size() != forward_.rows())
    throw Error(ErrorCode::DimensionMismatch, "inconsistent subproblem dimensions");
  rhs_ = forward_.adjoint_apply(data);
  const Index N = forward_.cols();
  direct_ = cfg.inner_solver == InnerSolver::Direct ||
            (cfg.inner_solver == InnerSolver::Auto && N <= cfg.direct_max_size);
  if (direct_) {
    if (const Matrix* d = forward_.dense()) {
      gram_.noalias() = d->transpose() * (*d);
    } else {
      const Matrix Fd = forward_.to_dense();
      gram_.noalias() = Fd.transpose() * Fd;
    }
  } else {
    forward_diag_ = forward_.normal_diagonal();
  }
  if (!sparsifier_.sparse()) r_dense_ = sparsifier_.to_dense();
}

Vector NormalEquationSolver::apply_normal(const Vector& weights, const Vector& x) const {
  Vector out = forward_.adjoint_apply(forward_.apply(x));
  out += sparsifier_.adjoint_apply(weights.cwiseProduct(sparsifier_.apply(x)));
  return out;
}

QuadraticSolution NormalEquationSolver::solve(const Vector& weights, const Vector* warm_start) const {
  if (weights.size() != sparsifier_.rows())
    throw Error(ErrorCode::DimensionMismatch, "weights must have one entry per sparsifier row");
  if (!(weights.array() > 0.0).all() || !weights.allFinite())
    throw Error(ErrorCode::InvalidArgument, "weights must be finite and positive");
  return direct_ ? solve_direct(weights) : solve_pcg(weights, warm_start);
}

QuadraticSolution NormalEquationSolver::solve_direct(const Vector& weights) const {
  Matrix A = gram_;
  if (const SparseMatrix* R = sparsifier_.sparse()) {
    const SparseMatrix RtWR = R->transpose() * weights.asDiagonal() * (*R);
    A += Matrix(RtWR);
  } else {
    A.noalias() += r_dense_->transpose() * weights.asDiagonal() * (*r_dense_);
  }
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularSystem,
                "normal matrix is not positive definite (common kernel condition violated?)");
  QuadraticSolution sol;
  sol.x = llt.solve(rhs_);
  // One step of iterative refinement tightens the residual on ill-conditioned blurs.
  const Vector r = rhs_ - A * sol.x;
  sol.x += llt.solve(r);
  const double bnorm = rhs_.norm();
  const double rnorm = (rhs_ - A * sol.x).norm();
  sol.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (!sol.x.allFinite()) throw Error(ErrorCode::SingularSystem, "direct solve produced non-finite values");
  return sol;
}

QuadraticSolution NormalEquationSolver::solve_pcg(const Vector& weights, const Vector* warm_start) const {
  Vector diag = forward_diag_;
  if (const SparseMatrix* R = sparsifier_.sparse()) {
    for (Index j = 0; j < R->outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(*R, j); it; ++it)
        diag(it.col()) += weights(it.row()) * it.value() * it.value();
  } else {
    diag += r_dense_->cwiseAbs2().transpose() * weights;
  }
  for (Index i = 0; i < diag.size(); ++i)
    if (!(diag(i) > 0.0)) diag(i) = 1.0;
  const auto action = [&](const Vector& v) { return apply_normal(weights, v); };
  PcgResult r = pcg(action, rhs_, diag, inner_tol_, inner_maxit_, warm_start);
  QuadraticSolution sol;
  sol.x = std::move(r.x);
  sol.iterations = r.iterations;
  sol.relative_residual = r.residual;
  sol.budget_exhausted = !r.converged;
  return sol;
}

QuadraticSolution solve_quadratic(const QuadraticSubproblem& sub, const SolverConfig& cfg) {
  NormalEquationSolver solver(sub.forward, sub.data, sub.sparsifier, cfg);
  return solver.solve(sub.weights);
}

bool check_common_kernel(const LinearMap& forward, const LinearMap& sparsifier) {
  if (forward.cols() != sparsifier.cols())
    throw Error(ErrorCode::DimensionMismatch, "operators must share the column count");
  const Index N = forward.cols();
  Matrix stacked(forward.rows() + sparsifier.rows(), N);
  stacked << forward.to_dense(), sparsifier.to_dense();
  if (stacked.rows() < N) return false;
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return false;
  const double cutoff = static_cast<double>(N) * std::numeric_limits<double>::epsilon() * sv(0);
  return (sv.array() > cutoff).count() == N;
}

}  // namespace jsbl
