#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "jsbl/experiments.hpp"
#include "jsbl/inference.hpp"
#include "jsbl/operators.hpp"
#include "jsbl/random.hpp"

namespace jsbl::experiments {

const DeblurOutcome& DeblurReport::find(const AlgorithmSpec& alg) const {
  for (const auto& o : outcomes)
    if (o.algorithm == alg) return o;
  throw Error(ErrorCode::InvalidArgument, "algorithm " + alg.name() + " was not run");
}

std::vector<Index> top_components(const Matrix& profile, Index count) {
  const Index K = profile.cols();
  std::vector<Index> idx(static_cast<std::size_t>(K));
  std::iota(idx.begin(), idx.end(), Index{0});
  count = std::min(count, K);
  std::partial_sort(idx.begin(), idx.begin() + count, idx.end(),
                    [&](Index a, Index b) { return profile(0, a) > profile(0, b); });
  idx.resize(static_cast<std::size_t>(count));
  std::sort(idx.begin(), idx.end());
  return idx;
}

DeblurReport run_deblurring(const DeblurConfig& cfg) {
  if (cfg.sigma2 <= 0.0) throw Error(ErrorCode::InvalidArgument, "sigma2 must be positive");
  DeblurReport rep;
  rep.config = cfg;
  rep.truth = generate_piecewise_signals(cfg.n, cfg.L, cfg.n_edges, cfg.seed);

  const LinearMap F = gaussian_blur_operator(cfg.n, cfg.gamma);
  const LinearMap R = difference_operator(cfg.n);
  const double sigma = std::sqrt(cfg.sigma2);
  std::mt19937_64 gen(derive_seed(cfg.seed, {1}));
  std::normal_distribution<double> normal;

  MMVProblem problem;
  problem.sparsifier = R;
  for (const Vector& x : rep.truth.signals) {
    Vector y = F.apply(x);
    for (Index i = 0; i < y.size(); ++i) y(i) += sigma * normal(gen);
    problem.forward_ops.push_back(F);
    problem.measurements.push_back(y);
    problem.noise_cov.emplace_back(Matrix(Vector::Constant(cfg.n, cfg.sigma2).asDiagonal()));
    rep.data.push_back(std::move(y));
  }
  const MMVProblem white = whiten_problem(problem);

  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    const AlgorithmSpec& alg = cfg.algorithms[a];
    DeblurOutcome out;
    out.algorithm = alg;
    out.result = run(problem, cfg.hyper.make(alg, R.rows()), cfg.solver);
    for (Index l = 0; l < cfg.L; ++l)
      out.rel_errors.push_back(relative_error(rep.truth.signals[static_cast<std::size_t>(l)],
                                              out.result.x_hat[static_cast<std::size_t>(l)]));
    out.theta_profile = out.result.theta_hat;
    if (alg.variant == Variant::GSBL) out.theta_profile = out.theta_profile.cwiseInverse();
    for (Index i = 0; i < out.theta_profile.rows(); ++i)
      out.theta_profile.row(i) /= out.theta_profile.row(i).maxCoeff();

    if (cfg.uq) {
      for (Index l = 0; l < cfg.L; ++l) {
        const Index row = out.result.theta_hat.rows() == 1 ? 0 : l;
        const auto post = conditional_posterior(white.forward_ops[l], white.measurements[l], R,
                                                out.result.theta_hat.row(row).transpose(), alg.variant);
        const Matrix samples = sample_posterior(
            post, cfg.n_samples, derive_seed(cfg.seed, {2, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(l)}),
            cfg.solver.execution);
        out.intervals.push_back(credible_intervals(samples, cfg.level));
      }
    }
    rep.outcomes.push_back(std::move(out));
  }
  return rep;
}

}  // namespace jsbl::experiments
