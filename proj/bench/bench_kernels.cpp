// Serial reference path vs OpenMP path for the parallel kernels.
#include <benchmark/benchmark.h>

#include "jsbl/experiments.hpp"
#include "jsbl/inference.hpp"
#include "jsbl/theta_update.hpp"
#include "jsbl/uq.hpp"

using namespace jsbl;

namespace {

Execution exec_of(const benchmark::State& st) { return st.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_ThetaUpdateGeneralR(benchmark::State& st) {
  const Index K = 20000;
  SparsityMoment s{Vector::LinSpaced(K, 0.0, 2.0)};
  const Vector vt = Vector::Constant(K, 1e-2);
  for (auto _ : st) benchmark::DoNotOptimize(theta_update_ias(s, 0.5, 12.0, vt, 8, exec_of(st)));
}
BENCHMARK(BM_ThetaUpdateGeneralR)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_JointRecovery(benchmark::State& st) {
  const auto trial = experiments::generate_sparse_trial(100, 40, 20, 16, 1e-6, 7);
  const auto hyper = experiments::signal_defaults().make({Variant::IAS, Coupling::Joint}, 100);
  SolverConfig cfg;
  cfg.execution = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(run(trial.problem, hyper, cfg));
}
BENCHMARK(BM_JointRecovery)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SeparateRecovery(benchmark::State& st) {
  const auto trial = experiments::generate_sparse_trial(100, 40, 20, 16, 1e-6, 7);
  const auto hyper = experiments::signal_defaults().make({Variant::IAS, Coupling::Separate}, 100);
  SolverConfig cfg;
  cfg.execution = exec_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(run(trial.problem, hyper, cfg));
}
BENCHMARK(BM_SeparateRecovery)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PosteriorSampling(benchmark::State& st) {
  const Index N = 64;
  ConditionalPosterior post;
  post.mean = Vector::Zero(N);
  const Matrix A = Matrix::Random(N, N);
  post.precision = A.transpose() * A + Matrix::Identity(N, N);
  for (auto _ : st) benchmark::DoNotOptimize(sample_posterior(post, 20000, 3, exec_of(st)));
}
BENCHMARK(BM_PosteriorSampling)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
