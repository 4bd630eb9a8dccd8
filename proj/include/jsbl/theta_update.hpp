#pragma once

#include <cmath>
#include <span>

#include "jsbl/model.hpp"

namespace jsbl {

/// s_k = sum_l [R x_l]_k^2 / 2, the quantity every theta update consumes.
struct SparsityMoment {
  Vector s;
};

SparsityMoment sparsity_moment(const LinearMap& sparsifier, std::span<const Vector> x,
                               Execution exec = Execution::Serial);

/// IAS theta update for L coupled signals. Closed forms for r = 1 (needs
/// eta > 0) and r = -1 (needs eta < 0); otherwise a per-component root of the
/// stationarity condition.
Vector theta_update_ias(const SparsityMoment& s, double r, double beta, const Vector& vartheta, Index L,
                        Execution exec = Execution::Serial);
Vector theta_update_ias(const SparsityMoment& s, const HyperModelConfig& hyper, Index L,
                        Execution exec = Execution::Serial);

/// Positive root of -s/theta^2 + (r/vartheta^r) theta^{r-1} - eta/theta = 0,
/// found numerically for any r (no closed-form shortcut). When two positive
/// roots exist the one with the lower scalar objective
/// s/theta + (theta/vartheta)^r - eta log theta wins; ties go to the smaller.
double solve_stationarity(double s, double r, double vartheta, double eta);

/// theta_k = (L/2 - 1 + beta) / (s_k + 1/vartheta_k).
Vector theta_update_gsbl(const SparsityMoment& s, double beta, const Vector& vartheta, Index L,
                         Execution exec = Execution::Serial);

/// Stationarity residual of the IAS theta subproblem at one component and the
/// scale 1 + sum of the absolute terms it is made of.
struct Residual {
  double value = 0.0;
  double scale = 1.0;
  double relative() const { return std::abs(value) / scale; }
};

Residual ias_stationarity_residual(double theta, double s, double r, double vartheta, double eta);
/// d/dtheta_k of the GSBL objective: s + 1/vartheta - (L/2 - 1 + beta)/theta.
Residual gsbl_stationarity_residual(double theta, double s, double beta, double vartheta, Index L);

}  // namespace jsbl
