#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "jsbl/experiments.hpp"
#include "jsbl/inference.hpp"
#include "jsbl/operators.hpp"

using namespace jsbl;

namespace {

void expect_non_increasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    EXPECT_LE(trace[i], trace[i - 1] + 1e-8 * std::max(1.0, std::abs(trace[i - 1]))) << "step " << i;
}

}  // namespace

TEST(Converged, Examples) {
  const std::vector<Vector> a{Vector::Ones(3)};
  EXPECT_TRUE(converged(a, a, 1e-12));
  const std::vector<Vector> zero{Vector::Zero(3)};
  EXPECT_FALSE(converged(zero, a, 1e-4));
  std::vector<Vector> b = a;
  b[0](0) += 1e-5;
  EXPECT_TRUE(converged(a, b, 1e-4));
  b[0](0) += 1e-3;
  EXPECT_FALSE(converged(a, b, 1e-4));
}

TEST(Run, IdentityProblemShrinksAndDescends) {
  MMVProblem p;
  p.sparsifier = identity_operator(5);
  Vector y(5);
  y << 30.0, 0.0, 0.0, -20.0, 0.0;
  p.forward_ops = {identity_operator(5)};
  p.measurements = {y};
  for (const auto& h : {HyperModelConfig::ias(-1, 1, 1e-4, 5), HyperModelConfig::gsbl(1, 1e4, 5)}) {
    const RecoveryResult r = run(p, h);
    ASSERT_EQ(r.x_hat.size(), 1u);
    EXPECT_LE(r.x_hat[0].cwiseAbs().maxCoeff(), 30.0);
    EXPECT_NEAR(r.x_hat[0](0), 30.0, 0.5);
    EXPECT_NEAR(r.x_hat[0](3), -20.0, 0.5);
    EXPECT_LE(std::abs(r.x_hat[0](1)), 1e-3);
    EXPECT_EQ(r.objective_trace.size(), 2u * r.iterations);
    expect_non_increasing(r.objective_trace);
  }
}

TEST(Run, JointEqualsSeparateAtLEqualsOne) {
  std::mt19937_64 g(41);
  const MMVProblem p = testutil::random_problem(8, 5, 7, 1, g);
  SolverConfig cfg;
  cfg.keep_history = true;
  for (Variant v : {Variant::IAS, Variant::GSBL}) {
    auto hj = v == Variant::IAS ? HyperModelConfig::ias(-1, 1, 1e-2, 7) : HyperModelConfig::gsbl(1, 1e2, 7);
    auto hs = hj;
    hs.algorithm.coupling = Coupling::Separate;
    const RecoveryResult a = run(p, hj, cfg), b = run(p, hs, cfg);
    ASSERT_EQ(a.history.size(), b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
      EXPECT_LE((a.history[i].x[0] - b.history[i].x[0]).norm(), 1e-12 * (1 + a.history[i].x[0].norm()));
      EXPECT_LE((a.history[i].theta - b.history[i].theta).norm(), 1e-12 * (1 + a.history[i].theta.norm()));
    }
  }
}

TEST(Run, SerialAndParallelBitwiseEqual) {
  const auto trial = experiments::generate_sparse_trial(60, 30, 8, 6, 1e-6, 5);
  for (const auto& alg : experiments::all_algorithms()) {
    const auto h = experiments::signal_defaults().make(alg, 60);
    SolverConfig s, par;
    s.execution = Execution::Serial;
    par.execution = Execution::Parallel;
    const RecoveryResult a = run(trial.problem, h, s), b = run(trial.problem, h, par);
    EXPECT_EQ(a.objective_trace, b.objective_trace);
    EXPECT_EQ(a.theta_hat, b.theta_hat);
    for (std::size_t l = 0; l < a.x_hat.size(); ++l) EXPECT_EQ(a.x_hat[l], b.x_hat[l]);
  }
}

TEST(Run, SeparateThetaHasOneRowPerSignal) {
  const auto trial = experiments::generate_sparse_trial(40, 30, 5, 3, 1e-6, 6);
  const auto r = run(trial.problem, experiments::signal_defaults().make({Variant::IAS, Coupling::Separate}, 40));
  EXPECT_EQ(r.theta_hat.rows(), 3);
  const auto j = run(trial.problem, experiments::signal_defaults().make({Variant::IAS, Coupling::Joint}, 40));
  EXPECT_EQ(j.theta_hat.rows(), 1);
  expect_non_increasing(r.objective_trace);
  expect_non_increasing(j.objective_trace);
}

TEST(Run, PermutationEquivariance) {
  std::mt19937_64 g(42);
  const MMVProblem p = testutil::random_problem(6, 4, 6, 3, g);
  MMVProblem q = p;
  std::swap(q.forward_ops[0], q.forward_ops[2]);
  std::swap(q.measurements[0], q.measurements[2]);
  const auto h = HyperModelConfig::ias(-1, 1, 1e-2, 6);
  const RecoveryResult a = run(p, h), b = run(q, h);
  EXPECT_LE((a.x_hat[0] - b.x_hat[2]).norm(), 1e-10 * (1 + a.x_hat[0].norm()));
  EXPECT_LE((a.x_hat[1] - b.x_hat[1]).norm(), 1e-10 * (1 + a.x_hat[1].norm()));
  EXPECT_LE((a.theta_hat - b.theta_hat).norm(), 1e-10 * a.theta_hat.norm());
}

TEST(Run, NoiseCovarianceIsWhitened) {
  std::mt19937_64 g(43);
  MMVProblem p = testutil::random_problem(6, 5, 5, 2, g);
  MMVProblem manual = p;
  for (Index l = 0; l < 2; ++l) {
    const Vector var = testutil::positive(5, 0.5, 2.0, g);
    p.noise_cov.emplace_back(Matrix(var.asDiagonal()));
    const auto sys = whiten(p.forward_ops[l], p.measurements[l], Matrix(var.asDiagonal()));
    manual.forward_ops[l] = sys.map;
    manual.measurements[l] = sys.data;
  }
  const auto h = HyperModelConfig::gsbl(1, 1e2, 5);
  const RecoveryResult a = run(p, h), b = run(manual, h);
  EXPECT_EQ(a.x_hat[0], b.x_hat[0]);
  EXPECT_EQ(a.theta_hat, b.theta_hat);
}

TEST(Run, ReportsBudgetAndValidation) {
  std::mt19937_64 g(44);
  const MMVProblem p = testutil::random_problem(6, 4, 6, 2, g);
  SolverConfig cfg;
  cfg.outer_maxit = 2;
  cfg.convergence_tol = 1e-300;
  const auto r = run(p, HyperModelConfig::ias(-1, 1, 1e-2, 6), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
  EXPECT_THROW(run(p, HyperModelConfig::ias(-1, 1, 1e-2, 5)), Error);
}

TEST(LeastSquares, InvertibleAndMinimumNorm) {
  std::mt19937_64 g(45);
  const Matrix A = testutil::randn(5, 5, g);
  const Vector y = testutil::randn(5, g);
  MMVProblem p;
  p.sparsifier = identity_operator(5);
  p.forward_ops = {LinearMap::from_dense(A)};
  p.measurements = {y};
  EXPECT_LE((least_squares_baseline(p)[0] - A.lu().solve(y)).norm(), 1e-10);

  // One DCT row: the solution lies along that row.
  const std::vector<Index> row{3};
  const LinearMap F = subsampled_dct_operator(8, row);
  p.sparsifier = identity_operator(8);
  p.forward_ops = {F};
  p.measurements = {Vector::Constant(1, 2.0)};
  const Vector x = least_squares_baseline(p)[0];
  const Vector a = dct_matrix(8).row(3).transpose();
  EXPECT_LE((x - 2.0 * a).norm(), 1e-12);

  // Overdetermined: residual orthogonal to range(F).
  const Matrix B = testutil::randn(9, 4, g);
  const Vector z = testutil::randn(9, g);
  p.sparsifier = identity_operator(4);
  p.forward_ops = {LinearMap::from_dense(B)};
  p.measurements = {z};
  const Vector xs = least_squares_baseline(p)[0];
  EXPECT_LE((B.transpose() * (B * xs - z)).norm(), 1e-10);
}

TEST(LeastSquares, LargeProblemsUseMinimumNormIterations) {
  const Index n = 40;  // 1600 unknowns goes through the iterative path
  const auto mask = radial_sampling_mask(n, 6, 0.0);
  const ComplexLinearMap Fc = subsampled_dft_operator(mask, n);
  const Vector truth = experiments::shepp_logan(n);
  const RealSystem sys = realify(Fc, Fc.apply(truth.cast<std::complex<double>>()));
  MMVProblem p;
  p.sparsifier = identity_operator(n * n);
  p.forward_ops = {sys.map};
  p.measurements = {sys.data};
  const Vector x = least_squares_baseline(p)[0];
  EXPECT_LE((sys.map.apply(x) - sys.data).norm(), 1e-8 * sys.data.norm());
  // Normal equations, and no larger than the (feasible) truth.
  const Vector back = sys.map.adjoint_apply(sys.map.apply(x));
  EXPECT_LE((sys.map.adjoint_apply(sys.data) - back).norm(), 1e-8 * back.norm());
  EXPECT_LE(x.norm(), truth.norm());
}
