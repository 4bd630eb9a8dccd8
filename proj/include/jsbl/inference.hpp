#pragma once

#include <span>
#include <vector>

#include "jsbl/model.hpp"

namespace jsbl {

/// Block-coordinate descent for the algorithm selected by hyper.algorithm.
/// theta starts at all ones and each outer iteration updates every x_l (one
/// linear solve per signal, in parallel) and then theta. Noise covariances
/// are whitened first. Joint coupling pools s_k over all L signals; Separate
/// runs L independent single-signal problems.
RecoveryResult run(const MMVProblem& problem, const HyperModelConfig& hyper, const SolverConfig& cfg = {});

/// max_l |x_new_l - x_prev_l| / max(|x_prev_l|, eps) < tol.
bool converged(std::span<const Vector> x_prev, std::span<const Vector> x_new, double tol);

/// Minimum-norm least-squares solution of each F_l x = y_l (after whitening).
/// Small problems use a complete orthogonal decomposition, large ones CGLS
/// started from zero.
std::vector<Vector> least_squares_baseline(const MMVProblem& problem,
                                           Execution exec = Execution::Parallel);

}  // namespace jsbl
