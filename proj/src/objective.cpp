#include "jsbl/objective.hpp"

#include <cmath>
#include <string>

namespace jsbl {

namespace {

void check_theta(const Vector& theta, Index K) {
  if (theta.size() != K)
    throw Error(ErrorCode::DimensionMismatch, "theta has length " + std::to_string(theta.size()) +
                                                  ", expected " + std::to_string(K));
  if (!(theta.array() > 0.0).all())
    throw Error(ErrorCode::NonPositiveTheta, "theta must be elementwise positive");
}

void check_signals(const ObjectiveContext& ctx, std::span<const Vector> x) {
  if (static_cast<Index>(x.size()) != ctx.L())
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(ctx.L()) + " signals, got " +
                                                  std::to_string(x.size()));
}

// 1/2 sum_l |F_l x_l - y_l|^2 and the per-component moments sum_l [R x_l]_k^2.
struct DataTerms {
  double misfit = 0.0;
  Vector rx_sq;
};

DataTerms data_terms(const ObjectiveContext& ctx, std::span<const Vector> x) {
  const auto& p = ctx.problem;
  DataTerms t;
  t.rx_sq = Vector::Zero(p.sparse_size());
  for (Index l = 0; l < ctx.L(); ++l) {
    t.misfit += 0.5 * (p.forward_ops[l].apply(x[l]) - p.measurements[l]).squaredNorm();
    t.rx_sq += p.sparsifier.apply(x[l]).cwiseAbs2();
  }
  return t;
}

}  // namespace

ObjectiveContext::ObjectiveContext(MMVProblem p, HyperModelConfig h)
    : problem(std::move(p)), hyper(std::move(h)) {
  validate(problem);
  validate_hyper_basic(hyper, problem.sparse_size());
}

double ObjectiveContext::eta() const { return jsbl::eta(hyper.r, hyper.beta, L()); }

double objective_ias(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta) {
  check_signals(ctx, x);
  check_theta(theta, ctx.problem.sparse_size());
  const auto& h = ctx.hyper;
  const DataTerms t = data_terms(ctx, x);
  const double prior = 0.5 * t.rx_sq.cwiseQuotient(theta).sum();
  double hyper_term = 0.0;
  for (Index k = 0; k < theta.size(); ++k) hyper_term += std::pow(theta(k) / h.vartheta(k), h.r);
  return t.misfit + prior + hyper_term - ctx.eta() * theta.array().log().sum();
}

double objective_gsbl(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta) {
  check_signals(ctx, x);
  check_theta(theta, ctx.problem.sparse_size());
  const auto& h = ctx.hyper;
  const DataTerms t = data_terms(ctx, x);
  const double log_coef = -static_cast<double>(ctx.L()) / 2.0 + 1.0 - h.beta;
  return t.misfit + 0.5 * t.rx_sq.dot(theta) + theta.cwiseQuotient(h.vartheta).sum() +
         log_coef * theta.array().log().sum();
}

double objective(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta) {
  return ctx.hyper.variant() == Variant::IAS ? objective_ias(ctx, x, theta)
                                             : objective_gsbl(ctx, x, theta);
}

Gradient gradient_ias(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta) {
  check_signals(ctx, x);
  check_theta(theta, ctx.problem.sparse_size());
  const auto& p = ctx.problem;
  const auto& h = ctx.hyper;
  Gradient g;
  Vector rx_sq = Vector::Zero(p.sparse_size());
  for (Index l = 0; l < ctx.L(); ++l) {
    const Vector rx = p.sparsifier.apply(x[l]);
    rx_sq += rx.cwiseAbs2();
    g.x.push_back(p.forward_ops[l].adjoint_apply(p.forward_ops[l].apply(x[l]) - p.measurements[l]) +
                  p.sparsifier.adjoint_apply(rx.cwiseQuotient(theta)));
  }
  const double e = ctx.eta();
  g.theta.resize(theta.size());
  for (Index k = 0; k < theta.size(); ++k) {
    const double t = theta(k);
    g.theta(k) = -rx_sq(k) / (2.0 * t * t) + std::pow(t, h.r - 1.0) * h.r / std::pow(h.vartheta(k), h.r) -
                 e / t;
  }
  return g;
}

Gradient gradient_gsbl(const ObjectiveContext& ctx, std::span<const Vector> x, const Vector& theta) {
  check_signals(ctx, x);
  check_theta(theta, ctx.problem.sparse_size());
  const auto& p = ctx.problem;
  const auto& h = ctx.hyper;
  Gradient g;
  Vector rx_sq = Vector::Zero(p.sparse_size());
  for (Index l = 0; l < ctx.L(); ++l) {
    const Vector rx = p.sparsifier.apply(x[l]);
    rx_sq += rx.cwiseAbs2();
    g.x.push_back(p.forward_ops[l].adjoint_apply(p.forward_ops[l].apply(x[l]) - p.measurements[l]) +
                  p.sparsifier.adjoint_apply(rx.cwiseProduct(theta)));
  }
  const double log_coef = -static_cast<double>(ctx.L()) / 2.0 + 1.0 - h.beta;
  g.theta = (0.5 * rx_sq + h.vartheta.cwiseInverse()).array() + log_coef * theta.array().inverse();
  return g;
}

double hessian_lower_bound(const HyperModelConfig& h, Index L, const Vector& theta, const Vector& w) {
  const double e = eta(h.r, h.beta, L);
  double sum = 0.0;
  for (Index k = 0; k < theta.size(); ++k) {
    const double t = theta(k);
    const double curv = std::pow(t, h.r) * h.r * (h.r - 1.0) / std::pow(h.vartheta(k), h.r) + e;
    sum += w(k) * w(k) / (t * t) * curv;
  }
  return sum;
}

double hessian_quadratic_form(const ObjectiveContext& ctx, std::span<const Vector> x,
                              const Vector& theta, std::span<const Vector> v, const Vector& w) {
  check_signals(ctx, x);
  check_signals(ctx, v);
  check_theta(theta, ctx.problem.sparse_size());
  if (w.size() != theta.size()) throw Error(ErrorCode::DimensionMismatch, "w must have length K");
  const auto& p = ctx.problem;
  double sum = 0.0;
  for (Index l = 0; l < ctx.L(); ++l) {
    sum += p.forward_ops[l].apply(v[l]).squaredNorm();
    const Vector rv = p.sparsifier.apply(v[l]);
    const Vector rx = p.sparsifier.apply(x[l]);
    for (Index k = 0; k < theta.size(); ++k) {
      const double t = theta(k);
      const double d = t * rv(k) - w(k) * rx(k);
      sum += d * d / (t * t * t);
    }
  }
  return sum + hessian_lower_bound(ctx.hyper, ctx.L(), theta, w);
}

double hessian_quadratic_form_gsbl(const ObjectiveContext& ctx, std::span<const Vector> x,
                                   const Vector& theta, std::span<const Vector> v, const Vector& w) {
  check_signals(ctx, x);
  check_signals(ctx, v);
  check_theta(theta, ctx.problem.sparse_size());
  if (w.size() != theta.size()) throw Error(ErrorCode::DimensionMismatch, "w must have length K");
  const auto& p = ctx.problem;
  double sum = 0.0;
  for (Index l = 0; l < ctx.L(); ++l) {
    sum += p.forward_ops[l].apply(v[l]).squaredNorm();
    const Vector rv = p.sparsifier.apply(v[l]);
    const Vector rx = p.sparsifier.apply(x[l]);
    sum += theta.dot(rv.cwiseAbs2()) + 2.0 * w.dot(rx.cwiseProduct(rv));
  }
  const double shape = static_cast<double>(ctx.L()) / 2.0 - 1.0 + ctx.hyper.beta;
  return sum + shape * w.cwiseAbs2().cwiseQuotient(theta.cwiseAbs2()).sum();
}

namespace {

bool local_case(double r, double e) { return (r > 0.0 && r < 1.0 && e > 0.0) || r < 0.0; }

}  // namespace

Convexity convexity_check(const HyperModelConfig& h, Index L, const Vector& theta) {
  if (h.variant() != Variant::IAS) return Convexity::NotGuaranteed;
  const double e = eta(h.r, h.beta, L);
  if (h.r >= 1.0 && e > 0.0) return Convexity::GloballyConvex;
  if (!local_case(h.r, e)) return Convexity::NotGuaranteed;
  check_theta(theta, h.vartheta.size());
  for (Index k = 0; k < theta.size(); ++k) {
    const double lhs = std::pow(theta(k), h.r) * h.r * (h.r - 1.0) / std::pow(h.vartheta(k), h.r);
    if (!(lhs > -e)) return Convexity::NotGuaranteed;
  }
  return Convexity::ConvexAtTheta;
}

Vector convexity_threshold(const HyperModelConfig& h, Index L) {
  const double e = eta(h.r, h.beta, L);
  if (h.variant() != Variant::IAS || !local_case(h.r, e))
    throw Error(ErrorCode::NotApplicable,
                "convexity threshold only exists for 0 < r < 1 with eta > 0, or r < 0");
  const double base = std::pow(e / (h.r * std::abs(h.r - 1.0)), 1.0 / h.r);
  return base * h.vartheta;
}

}  // namespace jsbl
