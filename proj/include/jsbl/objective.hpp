#pragma once

#include <span>
#include <vector>

#include "jsbl/model.hpp"

namespace jsbl {

struct ObjectiveContext {
  MMVProblem problem;
  HyperModelConfig hyper;

  /// Validates both members.
  ObjectiveContext(MMVProblem p, HyperModelConfig h);

  Index L() const { return problem.num_vectors(); }
  double eta() const;
};

struct Gradient {
  std::vector<Vector> x;
  Vector theta;
};

/// Negative log posterior of the IAS hierarchy (generalised gamma hyper-prior),
/// additive constants dropped:
///   1/2 sum_l (|F_l x_l - y_l|^2 + |D^{-1/2} R x_l|^2)
///     + sum_k (theta_k / vartheta_k)^r - eta sum_k log theta_k.
double objective_ias(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta);

/// GSBL counterpart (theta are precisions, gamma hyper-prior):
///   1/2 sum_l (|F_l x_l - y_l|^2 + |D^{1/2} R x_l|^2)
///     + sum_k theta_k / vartheta_k + (1 - L/2 - beta) sum_k log theta_k.
double objective_gsbl(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta);

/// Dispatches on ctx.hyper's variant.
double objective(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta);

Gradient gradient_ias(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta);
Gradient gradient_gsbl(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta);

/// Exact u^T H u of the IAS objective at (x, theta) for u = [v_1..v_L; w],
/// written as a sum of squares plus the hyper-prior curvature term.
double hessian_quadratic_form(const ObjectiveContext& ctx, std::span<const Vector> x,
                              const Vector& theta, std::span<const Vector> v, const Vector& w);

/// Same for the GSBL objective.
double hessian_quadratic_form_gsbl(const ObjectiveContext& ctx, std::span<const Vector> x,
                                   const Vector& theta, std::span<const Vector> v, const Vector& w);

/// sum_k theta_k^{-2} w_k^2 (theta_k^r r (r-1) / vartheta_k^r + eta); a lower
/// bound of the IAS Hessian quadratic form.
double hessian_lower_bound(const HyperModelConfig& hyper, Index L, const Vector& theta,
                           const Vector& w);

enum class Convexity { GloballyConvex, ConvexAtTheta, NotGuaranteed };

/// GloballyConvex when r >= 1 and eta > 0. ConvexAtTheta when 0 < r < 1 with
/// eta > 0, or r < 0, and theta_k^r r (r-1) / vartheta_k^r > -eta for every k.
Convexity convexity_check(const HyperModelConfig& hyper, Index L, const Vector& theta);

/// Per-component bound vartheta_k (eta / (r |r-1|))^{1/r} below which the
/// objective is convex. Throws NotApplicable outside the local-convexity case.
Vector convexity_threshold(const HyperModelConfig& hyper, Index L);

}  // namespace jsbl
