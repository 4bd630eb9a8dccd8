#pragma once

#include <cstdint>

#include "jsbl/model.hpp"

namespace jsbl {

/// Gaussian conditional posterior of one x_l given theta.
struct ConditionalPosterior {
  Vector mean;
  /// F^T F + R^T W R with W = diag(1/theta) (IAS) or diag(theta) (GSBL).
  Matrix precision;
};

ConditionalPosterior conditional_posterior(const LinearMap& forward, const Vector& data,
                                           const LinearMap& sparsifier, const Vector& theta,
                                           Variant variant);

/// n_samples x N matrix of independent draws, one per row. Draws are made in
/// fixed blocks whose generators are derived from (seed, block), so the result
/// does not depend on the thread count.
Matrix sample_posterior(const ConditionalPosterior& post, Index n_samples, std::uint64_t seed,
                        Execution exec = Execution::Parallel);

struct CredibleIntervals {
  Vector lo;
  Vector hi;
};

/// Componentwise empirical quantiles at (1 - level)/2 and (1 + level)/2,
/// linear interpolation between order statistics.
CredibleIntervals credible_intervals(const Matrix& samples, double level);

/// Quantile of a sample with linear interpolation (h = (n - 1) p).
double empirical_quantile(Vector values, double p);

}  // namespace jsbl
