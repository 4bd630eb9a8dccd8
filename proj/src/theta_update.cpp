#include "jsbl/theta_update.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "jsbl/parallel.hpp"

namespace jsbl {

SparsityMoment sparsity_moment(const LinearMap& sparsifier, std::span<const Vector> x, Execution exec) {
  const Index L = static_cast<Index>(x.size());
  std::vector<Vector> rx(x.size());
  parallel_for(L, exec, [&](Index l) { rx[static_cast<std::size_t>(l)] = sparsifier.apply(x[l]); });
  SparsityMoment m;
  m.s = Vector::Zero(sparsifier.rows());
  // Fixed summation order over l keeps Serial and Parallel bitwise equal.
  for (const auto& v : rx) m.s += v.cwiseAbs2();
  m.s *= 0.5;
  return m;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMinTheta = 1e-150;
constexpr double kMaxTheta = 1e150;

// phi(theta) = (r / vartheta^r) theta^{r+1} - eta theta - s, the stationarity
// condition multiplied by theta^2.
struct Stationarity {
  double a, p, eta, s;
  double operator()(double t) const { return a * std::pow(t, p) - eta * t - s; }
  double derivative(double t) const { return a * p * std::pow(t, p - 1.0) - eta; }
};

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Safeguarded Newton inside a sign-changing bracket.
double refine(const Stationarity& phi, double lo, double hi) {
  double flo = phi(lo);
  double x = std::sqrt(lo * hi);
  for (int it = 0; it < 400; ++it) {
    const double fx = phi(x);
    if (fx == 0.0) return x;
    if (sign(fx) == sign(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    double xn = x - fx / phi.derivative(x);
    if (!std::isfinite(xn) || !(xn > lo && xn < hi))
      xn = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const bool done = std::abs(xn - x) <= 2.0 * kEps * x || (hi - lo) <= 2.0 * kEps * hi;
    x = xn;
    if (done) break;
  }
  return x;
}

// Root of a monotone phi on (lo_edge, hi_edge) by expanding geometrically from
// an interior anchor. Returns nullopt when phi keeps its sign.
std::optional<double> root_on_branch(const Stationarity& phi, double anchor, bool toward_zero,
                                     bool toward_inf) {
  const double fa = phi(anchor);
  if (fa == 0.0) return anchor;
  if (!std::isfinite(fa)) return std::nullopt;
  if (toward_zero) {
    double prev = anchor;
    for (double t = anchor / 2.0; t >= kMinTheta; t /= 2.0) {
      const double f = phi(t);
      if (!std::isfinite(f)) break;
      if (f == 0.0) return t;
      if (sign(f) != sign(fa)) return refine(phi, t, prev);
      prev = t;
    }
  }
  if (toward_inf) {
    double prev = anchor;
    for (double t = anchor * 2.0; t <= kMaxTheta; t *= 2.0) {
      const double f = phi(t);
      if (std::isnan(f)) break;
      if (f == 0.0) return t;
      if (sign(f) != sign(fa)) return refine(phi, prev, t);
      prev = t;
    }
  }
  return std::nullopt;
}

double scalar_objective(double t, double s, double r, double vartheta, double eta) {
  return s / t + std::pow(t / vartheta, r) - eta * std::log(t);
}

}  // namespace

double solve_stationarity(double s, double r, double vartheta, double eta) {
  if (r == 0.0 || !(vartheta > 0.0) || !(s >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "stationarity needs r != 0, vartheta > 0, s >= 0");
  const Stationarity phi{r / std::pow(vartheta, r), r + 1.0, eta, s};
  std::vector<double> roots;
  // phi' vanishes at most once: (eta / (a p))^{1/r} when that is positive.
  const double ratio = phi.p != 0.0 ? eta / (phi.a * phi.p) : -1.0;
  if (ratio > 0.0) {
    const double tc = std::pow(ratio, 1.0 / r);
    if (tc > kMinTheta && tc < kMaxTheta) {
      if (auto t = root_on_branch(phi, tc, true, false)) roots.push_back(*t);
      if (auto t = root_on_branch(phi, tc, false, true)) roots.push_back(*t);
    }
  }
  if (roots.empty()) {
    // Monotone on the whole half-line (or the critical point is out of range).
    const double anchor = std::max(vartheta, std::max(s, 1e-12));
    if (auto t = root_on_branch(phi, anchor, true, true)) roots.push_back(*t);
  }
  if (roots.empty())
    throw Error(ErrorCode::NoPositiveRoot, "no positive root for s=" + std::to_string(s) +
                                               " r=" + std::to_string(r) +
                                               " vartheta=" + std::to_string(vartheta) +
                                               " eta=" + std::to_string(eta));
  double best = roots.front();
  double best_val = scalar_objective(best, s, r, vartheta, eta);
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const double v = scalar_objective(roots[i], s, r, vartheta, eta);
    if (v < best_val || (v == best_val && roots[i] < best)) {
      best = roots[i];
      best_val = v;
    }
  }
  return best;
}

Vector theta_update_ias(const SparsityMoment& m, double r, double beta, const Vector& vartheta, Index L,
                        Execution exec) {
  const Vector& s = m.s;
  if (vartheta.size() != s.size())
    throw Error(ErrorCode::DimensionMismatch, "vartheta and s must have the same length");
  if (!(s.array() >= 0.0).all()) throw Error(ErrorCode::InvalidArgument, "s must be nonnegative");
  const double e = eta(r, beta, L);
  Vector theta(s.size());
  if (r == 1.0) {
    if (!(e > 0.0)) throw Error(ErrorCode::InvalidEta, "r=1 update needs eta > 0, got " + std::to_string(e));
    parallel_for(s.size(), exec, [&](Index k) {
      const double v = vartheta(k);
      theta(k) = 0.5 * v * (e + std::sqrt(e * e + 2.0 / v * 2.0 * s(k)));
    });
  } else if (r == -1.0) {
    if (!(e < 0.0)) throw Error(ErrorCode::InvalidEta, "r=-1 update needs eta < 0, got " + std::to_string(e));
    parallel_for(s.size(), exec, [&](Index k) { theta(k) = (s(k) + vartheta(k)) / (-e); });
  } else {
    parallel_for(s.size(), exec, [&](Index k) { theta(k) = solve_stationarity(s(k), r, vartheta(k), e); });
  }
  return theta;
}

Vector theta_update_ias(const SparsityMoment& s, const HyperModelConfig& h, Index L, Execution exec) {
  return theta_update_ias(s, h.r, h.beta, h.vartheta, L, exec);
}

Vector theta_update_gsbl(const SparsityMoment& m, double beta, const Vector& vartheta, Index L,
                         Execution exec) {
  const Vector& s = m.s;
  if (vartheta.size() != s.size())
    throw Error(ErrorCode::DimensionMismatch, "vartheta and s must have the same length");
  const double shape = static_cast<double>(L) / 2.0 - 1.0 + beta;
  if (!(shape > 0.0))
    throw Error(ErrorCode::InvalidShape, "L/2 - 1 + beta must be positive, got " + std::to_string(shape));
  Vector theta(s.size());
  parallel_for(s.size(), exec, [&](Index k) { theta(k) = shape / (s(k) + 1.0 / vartheta(k)); });
  return theta;
}

Residual ias_stationarity_residual(double theta, double s, double r, double vartheta, double eta) {
  const double t1 = s / (theta * theta);
  const double t2 = std::pow(theta, r - 1.0) * r / std::pow(vartheta, r);
  const double t3 = eta / theta;
  return {-t1 + t2 - t3, 1.0 + std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

Residual gsbl_stationarity_residual(double theta, double s, double beta, double vartheta, Index L) {
  const double shape = static_cast<double>(L) / 2.0 - 1.0 + beta;
  const double t3 = shape / theta;
  return {s + 1.0 / vartheta - t3, 1.0 + std::abs(s) + 1.0 / vartheta + std::abs(t3)};
}

}  // namespace jsbl
