#include <algorithm>

#include "jsbl/experiments.hpp"
#include "jsbl/inference.hpp"
#include "jsbl/parallel.hpp"
#include "jsbl/random.hpp"

namespace jsbl::experiments {

namespace {

struct Job {
  Index L, M, t;
};

// Runs every algorithm on one seeded trial.
std::vector<TrialOutcome> run_trial(Index N, Index M, Index s, Index L, double sigma2, double eps_tol,
                                    std::uint64_t seed, const std::vector<AlgorithmSpec>& algs,
                                    const HyperDefaults& hyper, SolverConfig solver) {
  solver.execution = Execution::Serial;
  const SparseTrial trial = generate_sparse_trial(N, M, s, L, sigma2, seed);
  std::vector<TrialOutcome> out;
  for (const auto& alg : algs) {
    const RecoveryResult r = run(trial.problem, hyper.make(alg, N), solver);
    TrialOutcome o;
    o.error = normalized_error(trial.truth, r.x_hat);
    o.success = o.error < eps_tol;
    o.iterations = r.iterations;
    o.converged = r.converged;
    out.push_back(o);
  }
  return out;
}

}  // namespace

Index SuccessReport::smallest_full_success(const AlgorithmSpec& alg, Index L) const {
  Index best = -1;
  for (const auto& row : rows)
    if (row.algorithm == alg && row.L == L && row.esp == 1.0 && (best < 0 || row.M < best)) best = row.M;
  return best;
}

SuccessReport run_success_analysis(const SuccessConfig& cfg) {
  if (cfg.T < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  std::vector<Job> jobs;
  for (Index L : cfg.L_values)
    for (Index M : cfg.M_grid)
      for (Index t = 0; t < cfg.T; ++t) jobs.push_back({L, M, t});

  std::vector<std::vector<TrialOutcome>> results(jobs.size());
  parallel_for(
      static_cast<Index>(jobs.size()), cfg.solver.execution,
      [&](Index j) {
        const Job& job = jobs[static_cast<std::size_t>(j)];
        const auto seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(job.L), static_cast<std::uint64_t>(job.M),
                                                 static_cast<std::uint64_t>(job.t)});
        results[static_cast<std::size_t>(j)] =
            run_trial(cfg.N, job.M, cfg.s, job.L, cfg.sigma2, cfg.eps_tol, seed, cfg.algorithms, cfg.hyper, cfg.solver);
      },
      cfg.jobs);

  SuccessReport rep;
  rep.config = cfg;
  std::size_t j = 0;
  for (Index L : cfg.L_values) {
    for (Index M : cfg.M_grid) {
      std::vector<SuccessRow> rows(cfg.algorithms.size());
      for (std::size_t a = 0; a < rows.size(); ++a) {
        rows[a].algorithm = cfg.algorithms[a];
        rows[a].L = L;
        rows[a].M = M;
      }
      for (Index t = 0; t < cfg.T; ++t, ++j)
        for (std::size_t a = 0; a < rows.size(); ++a) rows[a].trials.push_back(results[j][a]);
      for (auto& row : rows) {
        double sum = 0.0;
        for (const auto& t : row.trials) sum += t.error;
        row.avg_error = sum / static_cast<double>(row.trials.size());
        row.esp = esp(row.trials);
        rep.rows.push_back(std::move(row));
      }
    }
  }
  return rep;
}

std::vector<Index> phase_axis(Index N, Index stride) {
  if (N < 1 || stride < 1) throw Error(ErrorCode::InvalidArgument, "phase axis needs N >= 1 and stride >= 1");
  std::vector<Index> axis{1};
  for (Index v = stride; v <= N; v += stride)
    if (v > 1) axis.push_back(v);
  if (axis.back() != N) axis.push_back(N);
  return axis;
}

PhaseReport run_phase_transition(const PhaseConfig& cfg) {
  if (cfg.T < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  PhaseReport rep;
  rep.config = cfg;
  rep.s_axis = phase_axis(cfg.N, cfg.stride);
  rep.M_axis = rep.s_axis;
  const Index ns = static_cast<Index>(rep.s_axis.size());
  const Index nm = static_cast<Index>(rep.M_axis.size());
  rep.esp = Matrix::Zero(ns, nm);
  parallel_for(
      ns * nm, cfg.solver.execution,
      [&](Index cell) {
        const Index i = cell / nm;
        const Index k = cell % nm;
        const Index s = rep.s_axis[static_cast<std::size_t>(i)];
        const Index M = rep.M_axis[static_cast<std::size_t>(k)];
        std::vector<TrialOutcome> trials;
        for (Index t = 0; t < cfg.T; ++t) {
          const auto seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(M),
                                                   static_cast<std::uint64_t>(t)});
          trials.push_back(
              run_trial(cfg.N, M, s, cfg.L, cfg.sigma2, cfg.eps_tol, seed, {cfg.algorithm}, cfg.hyper, cfg.solver)
                  .front());
        }
        rep.esp(i, k) = esp(trials);
      },
      cfg.jobs);
  return rep;
}

}  // namespace jsbl::experiments
