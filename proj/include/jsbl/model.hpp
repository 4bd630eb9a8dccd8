#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jsbl/errors.hpp"
#include "jsbl/linear_map.hpp"

namespace jsbl {

enum class Variant { IAS, GSBL };
enum class Coupling { Separate, Joint };

struct AlgorithmSpec {
  Variant variant = Variant::IAS;
  Coupling coupling = Coupling::Joint;

  /// "ias", "gsbl", "mmv-ias" or "mmv-gsbl".
  std::string name() const;
  static AlgorithmSpec parse(std::string_view name);

  friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

/// L linear inverse problems y_l = F_l x_l + e_l sharing one sparsifier R.
struct MMVProblem {
  std::vector<LinearMap> forward_ops;
  std::vector<Vector> measurements;
  LinearMap sparsifier;
  /// Either empty or one entry per measurement vector; nullopt means identity.
  std::vector<std::optional<Matrix>> noise_cov;

  Index num_vectors() const { return static_cast<Index>(forward_ops.size()); }
  Index signal_size() const { return sparsifier.cols(); }
  Index sparse_size() const { return sparsifier.rows(); }
  bool has_noise_cov() const;
};

/// Hyper-prior parameters (r, beta, vartheta) plus the algorithm they drive.
/// GSBL uses a gamma hyper-prior, so r is pinned to 1 there.
struct HyperModelConfig {
  AlgorithmSpec algorithm;
  double r = -1.0;
  double beta = 1.0;
  Vector vartheta;

  static HyperModelConfig ias(double r, double beta, Vector vartheta,
                              Coupling coupling = Coupling::Joint);
  static HyperModelConfig ias(double r, double beta, double vartheta, Index K,
                              Coupling coupling = Coupling::Joint);
  /// A supplied r is ignored with a warning on std::clog.
  static HyperModelConfig gsbl(double beta, Vector vartheta, Coupling coupling = Coupling::Joint,
                               std::optional<double> r = std::nullopt);
  static HyperModelConfig gsbl(double beta, double vartheta, Index K,
                               Coupling coupling = Coupling::Joint,
                               std::optional<double> r = std::nullopt);

  Variant variant() const { return algorithm.variant; }
  Coupling coupling() const { return algorithm.coupling; }
};

enum class InnerSolver { Auto, PCG, Direct };
enum class Execution { Serial, Parallel };

struct SolverConfig {
  InnerSolver inner_solver = InnerSolver::Auto;
  double inner_tol = 1e-8;
  int inner_maxit = 5000;
  int outer_maxit = 200;
  double convergence_tol = 1e-4;
  std::uint64_t seed = 0;
  /// Parallel runs the L x-updates and the K theta components with OpenMP;
  /// Serial is the reference path. Both produce identical results.
  Execution execution = Execution::Parallel;
  /// Record the full (x, theta) state after every outer iteration.
  bool keep_history = false;
  /// Auto picks Direct when N is at most this.
  Index direct_max_size = 512;

  void validate() const;
};

struct IterationState {
  std::vector<Vector> x;
  /// One row for joint coupling, L rows for separate coupling.
  Matrix theta;
  int iteration = 0;
  std::vector<double> objective_trace;
};

struct RecoveryResult {
  std::vector<Vector> x_hat;
  /// One row (joint) or one row per signal (separate).
  Matrix theta_hat;
  bool converged = false;
  int iterations = 0;
  /// Objective after each half step: [x-update, theta-update] per iteration.
  std::vector<double> objective_trace;
  double wall_time = 0.0;
  /// Number of inner solves that exhausted their iteration budget.
  int inner_budget_exhausted = 0;
  std::vector<IterationState> history;
};

/// eta = r * beta - (L/2 + 1).
double eta(double r, double beta, Index L);

/// Number of signals that share one theta under the given coupling.
Index coupled_count(Coupling coupling, Index L);

void validate(const MMVProblem& problem);
void validate(const MMVProblem& problem, const HyperModelConfig& hyper);
/// r != 0, beta > 0, vartheta > 0 of length K.
void validate_hyper_basic(const HyperModelConfig& hyper, Index K);
/// Basic checks plus the sign of eta (IAS, r = +-1) or of the GSBL gamma shape
/// that keeps the closed-form theta updates positive.
void validate_hyper(const HyperModelConfig& hyper, Index K, Index L);

}  // namespace jsbl
