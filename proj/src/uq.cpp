#include "jsbl/uq.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "jsbl/parallel.hpp"
#include "jsbl/random.hpp"

namespace jsbl {

ConditionalPosterior conditional_posterior(const LinearMap& forward, const Vector& data,
                                           const LinearMap& sparsifier, const Vector& theta,
                                           Variant variant) {
  if (forward.cols() != sparsifier.cols() || data.size() != forward.rows() || theta.size() != sparsifier.rows())
    throw Error(ErrorCode::DimensionMismatch, "inconsistent posterior dimensions");
  if (!(theta.array() > 0.0).all()) throw Error(ErrorCode::NonPositiveTheta, "theta must be positive");
  const Vector w = variant == Variant::IAS ? Vector(theta.cwiseInverse()) : theta;
  const Matrix F = forward.to_dense();
  const Matrix R = sparsifier.to_dense();
  ConditionalPosterior post;
  post.precision.noalias() = F.transpose() * F;
  post.precision.noalias() += R.transpose() * w.asDiagonal() * R;
  Eigen::LLT<Matrix> llt(post.precision);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotPositiveDefinite, "posterior precision is not positive definite");
  const Vector b = forward.adjoint_apply(data);
  post.mean = llt.solve(b);
  post.mean += llt.solve(Vector(b - post.precision * post.mean));
  return post;
}

namespace {
constexpr Index kSampleBlock = 1024;
}

Matrix sample_posterior(const ConditionalPosterior& post, Index n_samples, std::uint64_t seed, Execution exec) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
  const Index N = post.mean.size();
  if (post.precision.rows() != N || post.precision.cols() != N)
    throw Error(ErrorCode::DimensionMismatch, "precision and mean sizes differ");
  Eigen::LLT<Matrix> llt(post.precision);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotPositiveDefinite, "posterior precision is not positive definite");
  const Matrix U = llt.matrixU();

  Matrix out(n_samples, N);
  const Index blocks = (n_samples + kSampleBlock - 1) / kSampleBlock;
  parallel_for(blocks, exec, [&](Index b) {
    const Index first = b * kSampleBlock;
    const Index count = std::min(kSampleBlock, n_samples - first);
    std::mt19937_64 gen(derive_seed(seed, {static_cast<std::uint64_t>(b)}));
    std::normal_distribution<double> normal;
    Matrix xi(N, count);
    for (Index j = 0; j < count; ++j)
      for (Index i = 0; i < N; ++i) xi(i, j) = normal(gen);
    // U^T U = precision, so z = U^{-1} xi has covariance precision^{-1}.
    U.triangularView<Eigen::Upper>().solveInPlace(xi);
    out.middleRows(first, count) = (xi.colwise() + post.mean).transpose();
  });
  return out;
}

double empirical_quantile(Vector values, double p) {
  const Index n = values.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  std::sort(values.data(), values.data() + n);
  const double h = static_cast<double>(n - 1) * std::clamp(p, 0.0, 1.0);
  const auto i = static_cast<Index>(std::floor(h));
  if (i + 1 >= n) return values(n - 1);
  return values(i) + (h - static_cast<double>(i)) * (values(i + 1) - values(i));
}

CredibleIntervals credible_intervals(const Matrix& samples, double level) {
  if (samples.rows() == 0 || samples.cols() == 0)
    throw Error(ErrorCode::InvalidArgument, "no samples");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
  CredibleIntervals ci;
  ci.lo.resize(samples.cols());
  ci.hi.resize(samples.cols());
  for (Index k = 0; k < samples.cols(); ++k) {
    const Vector col = samples.col(k);
    ci.lo(k) = empirical_quantile(col, 0.5 * (1.0 - level));
    ci.hi(k) = empirical_quantile(col, 0.5 * (1.0 + level));
  }
  return ci;
}

}  // namespace jsbl
