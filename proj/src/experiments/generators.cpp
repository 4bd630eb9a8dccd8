#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "jsbl/experiments.hpp"
#include "jsbl/operators.hpp"
#include "jsbl/random.hpp"

namespace jsbl::experiments {

namespace {

// First k entries of a seeded shuffle of 0..n-1, sorted.
std::vector<Index> draw_subset(Index n, Index k, std::mt19937_64& gen) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  std::shuffle(all.begin(), all.end(), gen);
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

PiecewiseSignals generate_piecewise_signals(Index n, Index L, Index n_edges, std::uint64_t seed) {
  if (n_edges < 1 || n_edges >= n || L < 1)
    throw Error(ErrorCode::InvalidArgument, "need 1 <= n_edges < n and L >= 1");
  std::mt19937_64 gen(derive_seed(seed, {0}));
  PiecewiseSignals out;
  out.edges = draw_subset(n - 1, n_edges, gen);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Index l = 0; l < L; ++l) {
    Vector x(n);
    Index piece_start = 0;
    for (std::size_t e = 0; e <= out.edges.size(); ++e) {
      const Index piece_end = e < out.edges.size() ? out.edges[e] + 1 : n;
      double v = unif(gen);
      // Adjacent pieces must differ for the jump to exist.
      while (piece_start > 0 && v == x(piece_start - 1)) v = unif(gen);
      x.segment(piece_start, piece_end - piece_start).setConstant(v);
      piece_start = piece_end;
    }
    x /= x.maxCoeff();
    out.signals.push_back(std::move(x));
  }
  return out;
}

SparseTrial generate_sparse_trial(Index N, Index M, Index s, Index L, double sigma2, std::uint64_t seed) {
  if (s < 1 || s > N || M < 1 || M > N || L < 1 || sigma2 < 0.0)
    throw Error(ErrorCode::InvalidArgument, "need 1 <= s <= N, 1 <= M <= N, L >= 1, sigma2 >= 0");
  std::mt19937_64 gen(derive_seed(seed, {1}));
  std::normal_distribution<double> normal;
  SparseTrial t;
  t.support = draw_subset(N, s, gen);
  for (Index l = 0; l < L; ++l) {
    Vector x = Vector::Zero(N);
    for (Index k : t.support) x(k) = normal(gen);
    t.truth.push_back(std::move(x));
  }
  t.omega = draw_subset(N, M, gen);
  const LinearMap F = subsampled_dct_operator(N, t.omega);
  const double sigma = std::sqrt(sigma2);
  t.problem.sparsifier = identity_operator(N);
  for (Index l = 0; l < L; ++l) {
    Vector y = F.apply(t.truth[static_cast<std::size_t>(l)]);
    if (sigma2 > 0.0)
      for (Index i = 0; i < M; ++i) y(i) += sigma * normal(gen);
    t.problem.forward_ops.push_back(F);
    t.problem.measurements.push_back(std::move(y));
    if (sigma2 > 0.0) t.problem.noise_cov.emplace_back(Matrix(Vector::Constant(M, sigma2).asDiagonal()));
  }
  return t;
}

}  // namespace jsbl::experiments
