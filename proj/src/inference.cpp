#include "jsbl/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/QR>

#include "jsbl/objective.hpp"
#include "jsbl/operators.hpp"
#include "jsbl/parallel.hpp"
#include "jsbl/quad_solver.hpp"
#include "jsbl/theta_update.hpp"

namespace jsbl {

bool converged(std::span<const Vector> x_prev, std::span<const Vector> x_new, double tol) {
  if (x_prev.size() != x_new.size())
    throw Error(ErrorCode::DimensionMismatch, "iterate lists differ in length");
  double worst = 0.0;
  for (std::size_t l = 0; l < x_new.size(); ++l) {
    if (x_prev[l].size() != x_new[l].size())
      throw Error(ErrorCode::DimensionMismatch, "iterates differ in length");
    const double denom = std::max(x_prev[l].norm(), std::numeric_limits<double>::epsilon());
    worst = std::max(worst, (x_new[l] - x_prev[l]).norm() / denom);
  }
  return worst < tol;
}

namespace {

using Clock = std::chrono::steady_clock;

RecoveryResult run_joint(const MMVProblem& problem, const HyperModelConfig& hyper, const SolverConfig& cfg) {
  const auto start = Clock::now();
  const ObjectiveContext ctx(problem, hyper);
  const Index L = problem.num_vectors();
  const Index K = problem.sparse_size();
  const bool ias = hyper.variant() == Variant::IAS;
  const Execution exec = cfg.execution;

  std::vector<NormalEquationSolver> solvers;
  solvers.reserve(static_cast<std::size_t>(L));
  for (Index l = 0; l < L; ++l)
    solvers.emplace_back(problem.forward_ops[l], problem.measurements[l], problem.sparsifier, cfg);

  RecoveryResult res;
  Vector theta = Vector::Ones(K);
  std::vector<Vector> x(static_cast<std::size_t>(L), Vector::Zero(problem.signal_size()));
  std::vector<Vector> x_new(x.size());
  std::vector<char> exhausted(x.size(), 0);

  for (int it = 1; it <= cfg.outer_maxit; ++it) {
    const Vector weights = ias ? Vector(theta.cwiseInverse()) : theta;
    parallel_for(L, exec, [&](Index l) {
      const auto i = static_cast<std::size_t>(l);
      QuadraticSolution sol = solvers[i].solve(weights, it > 1 ? &x[i] : nullptr);
      x_new[i] = std::move(sol.x);
      exhausted[i] = sol.budget_exhausted;
    });
    for (char e : exhausted) res.inner_budget_exhausted += e;
    res.objective_trace.push_back(objective(ctx, x_new, theta));

    const SparsityMoment s = sparsity_moment(problem.sparsifier, x_new, exec);
    theta = ias ? theta_update_ias(s, hyper, L, exec) : theta_update_gsbl(s, hyper.beta, hyper.vartheta, L, exec);
    res.objective_trace.push_back(objective(ctx, x_new, theta));

    const bool done = converged(x, x_new, cfg.convergence_tol);
    std::swap(x, x_new);
    res.iterations = it;
    if (cfg.keep_history) {
      IterationState st;
      st.x = x;
      st.theta = theta.transpose();
      st.iteration = it;
      st.objective_trace = res.objective_trace;
      res.history.push_back(std::move(st));
    }
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.x_hat = std::move(x);
  res.theta_hat = theta.transpose();
  res.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return res;
}

MMVProblem single(const MMVProblem& problem, Index l) {
  MMVProblem p;
  p.forward_ops = {problem.forward_ops[l]};
  p.measurements = {problem.measurements[l]};
  p.sparsifier = problem.sparsifier;
  return p;
}

RecoveryResult run_separate(const MMVProblem& problem, const HyperModelConfig& hyper, const SolverConfig& cfg) {
  const auto start = Clock::now();
  const Index L = problem.num_vectors();
  HyperModelConfig h1 = hyper;
  h1.algorithm.coupling = Coupling::Joint;
  SolverConfig inner = cfg;
  inner.execution = Execution::Serial;
  std::vector<RecoveryResult> parts(static_cast<std::size_t>(L));
  parallel_for(L, cfg.execution, [&](Index l) {
    parts[static_cast<std::size_t>(l)] = run_joint(single(problem, l), h1, inner);
  });

  RecoveryResult res;
  res.converged = true;
  res.theta_hat.resize(L, problem.sparse_size());
  std::size_t trace_len = 0;
  for (Index l = 0; l < L; ++l) {
    auto& p = parts[static_cast<std::size_t>(l)];
    res.x_hat.push_back(p.x_hat.front());
    res.theta_hat.row(l) = p.theta_hat.row(0);
    res.converged = res.converged && p.converged;
    res.iterations = std::max(res.iterations, p.iterations);
    res.inner_budget_exhausted += p.inner_budget_exhausted;
    trace_len = std::max(trace_len, p.objective_trace.size());
  }
  // A finished signal keeps contributing its final objective value.
  res.objective_trace.assign(trace_len, 0.0);
  for (const auto& p : parts)
    for (std::size_t i = 0; i < trace_len; ++i)
      res.objective_trace[i] += p.objective_trace[std::min(i, p.objective_trace.size() - 1)];

  if (cfg.keep_history) {
    for (int it = 0; it < res.iterations; ++it) {
      IterationState st;
      st.iteration = it + 1;
      st.theta.resize(L, problem.sparse_size());
      for (Index l = 0; l < L; ++l) {
        const auto& h = parts[static_cast<std::size_t>(l)].history;
        const auto& src = h[std::min<std::size_t>(static_cast<std::size_t>(it), h.size() - 1)];
        st.x.push_back(src.x.front());
        st.theta.row(l) = src.theta.row(0);
      }
      const std::size_t upto = std::min(trace_len, 2 * static_cast<std::size_t>(it + 1));
      st.objective_trace.assign(res.objective_trace.begin(), res.objective_trace.begin() + upto);
      res.history.push_back(std::move(st));
    }
  }
  res.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return res;
}

}  // namespace

RecoveryResult run(const MMVProblem& problem, const HyperModelConfig& hyper, const SolverConfig& cfg) {
  cfg.validate();
  validate(problem, hyper);
  const MMVProblem white = problem.has_noise_cov() ? whiten_problem(problem) : problem;
  return hyper.coupling() == Coupling::Joint ? run_joint(white, hyper, cfg) : run_separate(white, hyper, cfg);
}

namespace {

// Conjugate gradients on the normal equations, started at zero so the
// iterates stay in range(F^T) and converge to the minimum-norm solution.
Vector cgls(const LinearMap& F, const Vector& y, double tol, int maxit) {
  Vector x = Vector::Zero(F.cols());
  Vector r = y;
  Vector s = F.adjoint_apply(r);
  Vector p = s;
  double gamma = s.squaredNorm();
  const double target = tol * tol * gamma;
  for (int it = 0; it < maxit && gamma > target && gamma > 0.0; ++it) {
    const Vector q = F.apply(p);
    const double qq = q.squaredNorm();
    if (!(qq > 0.0)) break;
    const double alpha = gamma / qq;
    x.noalias() += alpha * p;
    r.noalias() -= alpha * q;
    s = F.adjoint_apply(r);
    const double gamma_next = s.squaredNorm();
    p = s + (gamma_next / gamma) * p;
    gamma = gamma_next;
  }
  return x;
}

constexpr Index kDenseLsLimit = 1024;

}  // namespace

std::vector<Vector> least_squares_baseline(const MMVProblem& problem, Execution exec) {
  validate(problem);
  const MMVProblem white = problem.has_noise_cov() ? whiten_problem(problem) : problem;
  const Index L = white.num_vectors();
  std::vector<Vector> out(static_cast<std::size_t>(L));
  parallel_for(L, exec, [&](Index l) {
    const LinearMap& F = white.forward_ops[l];
    const Vector& y = white.measurements[l];
    if (F.cols() <= kDenseLsLimit && F.rows() <= 4 * kDenseLsLimit) {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(F.to_dense());
      out[static_cast<std::size_t>(l)] = cod.solve(y);
    } else {
      out[static_cast<std::size_t>(l)] = cgls(F, y, 1e-10, 2000);
    }
  });
  return out;
}

}  // namespace jsbl
