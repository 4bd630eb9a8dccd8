#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jsbl/model.hpp"
#include "jsbl/uq.hpp"

namespace jsbl::experiments {

// ---------------------------------------------------------------- generators

struct PiecewiseSignals {
  std::vector<Vector> signals;
  /// Difference-operator rows k (x[k+1] != x[k]) shared by all signals, sorted.
  std::vector<Index> edges;
};

/// L piecewise-constant signals on n points with the same n_edges jumps.
/// Values are uniform(0, 1) per piece, then each signal is scaled to max 1.
PiecewiseSignals generate_piecewise_signals(Index n, Index L, Index n_edges, std::uint64_t seed);

struct SparseTrial {
  MMVProblem problem;
  std::vector<Vector> truth;
  std::vector<Index> support;
  std::vector<Index> omega;
};

/// Common support of size s, standard normal nonzeros, F = rows omega of the
/// orthonormal DCT (one F shared by all signals), R = I, noise N(0, sigma2 I).
/// The problem carries the noise covariance when sigma2 > 0.
SparseTrial generate_sparse_trial(Index N, Index M, Index s, Index L, double sigma2, std::uint64_t seed);

/// sqrt(sum_l |x_l - xhat_l|^2 / sum_l |x_l|^2).
double normalized_error(const std::vector<Vector>& truth, const std::vector<Vector>& estimate);

/// |x - xhat| / |x|.
double relative_error(const Vector& truth, const Vector& estimate);

/// Modified Shepp-Logan phantom (ten ellipses), column-major n*n, clipped to
/// [0, 1]. Pixel (i, j) has row i from top to bottom and column j.
Vector shepp_logan(Index n);

// ------------------------------------------------------------ hyper defaults

/// Hyper-parameters used by all experiment drivers.
struct HyperDefaults {
  double ias_r = -1.0;
  double ias_beta = 1.0;
  double ias_vartheta = 1e-4;
  double gsbl_beta = 1.0;
  double gsbl_vartheta = 1e4;

  HyperModelConfig make(const AlgorithmSpec& alg, Index K) const;
};

/// Signal-recovery defaults (r, beta, vartheta) = (-1, 1, 1e-4), GSBL (1, 1e4).
HyperDefaults signal_defaults();
/// Imaging defaults (-1, 1, 1e-3), GSBL (1, 1e3).
HyperDefaults imaging_defaults();

std::vector<AlgorithmSpec> all_algorithms();

// ---------------------------------------------------------------- deblurring

struct DeblurConfig {
  Index n = 40;
  Index L = 4;
  Index n_edges = 5;
  double gamma = 3e-2;
  double sigma2 = 1e-2;
  std::uint64_t seed = 1;
  HyperDefaults hyper = signal_defaults();
  std::vector<AlgorithmSpec> algorithms = all_algorithms();
  SolverConfig solver;
  bool uq = true;
  Index n_samples = 10000;
  double level = 0.999;
};

struct DeblurOutcome {
  AlgorithmSpec algorithm;
  RecoveryResult result;
  std::vector<double> rel_errors;
  /// theta_hat (IAS) or 1/theta_hat (GSBL), each row scaled to max 1.
  Matrix theta_profile;
  /// One per signal when uq is on.
  std::vector<CredibleIntervals> intervals;
};

struct DeblurReport {
  DeblurConfig config;
  PiecewiseSignals truth;
  std::vector<Vector> data;
  std::vector<DeblurOutcome> outcomes;

  const DeblurOutcome& find(const AlgorithmSpec& alg) const;
};

DeblurReport run_deblurring(const DeblurConfig& cfg);

/// Indices of the `count` largest entries of the first profile row, sorted.
std::vector<Index> top_components(const Matrix& profile, Index count);

// ----------------------------------------------------------- success analysis

struct TrialOutcome {
  double error = 0.0;
  bool success = false;
  int iterations = 0;
  bool converged = false;
};

struct SuccessConfig {
  Index N = 100;
  Index s = 20;
  Index T = 10;
  double sigma2 = 1e-6;
  double eps_tol = 1e-2;
  std::vector<Index> M_grid{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<Index> L_values{4, 8, 16};
  std::vector<AlgorithmSpec> algorithms{{Variant::IAS, Coupling::Separate}, {Variant::IAS, Coupling::Joint}};
  HyperDefaults hyper = signal_defaults();
  std::uint64_t seed = 1;
  SolverConfig solver;
  /// Worker threads for trials; 0 uses the OpenMP default.
  int jobs = 0;
};

struct SuccessRow {
  AlgorithmSpec algorithm;
  Index L = 0;
  Index M = 0;
  double avg_error = 0.0;
  double esp = 0.0;
  std::vector<TrialOutcome> trials;
};

struct SuccessReport {
  SuccessConfig config;
  std::vector<SuccessRow> rows;

  /// Smallest M on the grid with ESP = 1, or -1 when never reached.
  Index smallest_full_success(const AlgorithmSpec& alg, Index L) const;
};

/// Fraction of outcomes flagged successful.
double esp(const std::vector<TrialOutcome>& trials);

SuccessReport run_success_analysis(const SuccessConfig& cfg);

// ----------------------------------------------------------- phase transition

struct PhaseConfig {
  Index N = 100;
  Index stride = 5;
  Index L = 16;
  Index T = 10;
  double sigma2 = 1e-6;
  double eps_tol = 1e-2;
  AlgorithmSpec algorithm{Variant::IAS, Coupling::Joint};
  HyperDefaults hyper = signal_defaults();
  std::uint64_t seed = 1;
  SolverConfig solver;
  int jobs = 0;
};

struct PhaseReport {
  PhaseConfig config;
  std::vector<Index> s_axis;
  std::vector<Index> M_axis;
  /// ESP with one row per s and one column per M.
  Matrix esp;
};

/// {1, stride, 2 stride, ..., N}.
std::vector<Index> phase_axis(Index N, Index stride);

PhaseReport run_phase_transition(const PhaseConfig& cfg);

// --------------------------------------------------------------- parallel MRI

struct MriConfig {
  Index n = 64;
  Index L = 4;
  std::vector<Index> lines{20};
  double sigma2 = 1e-3;
  HyperDefaults hyper = imaging_defaults();
  /// Any of ls, ias, gsbl, mmv-ias, mmv-gsbl.
  std::vector<std::string> algorithms{"ls", "ias", "gsbl", "mmv-ias", "mmv-gsbl"};
  std::uint64_t seed = 1;
  SolverConfig solver;
};

struct MriOutcome {
  std::string algorithm;
  Index lines = 0;
  double overall_error = 0.0;
  std::vector<double> coil_errors;
  std::vector<Vector> coil_images;
  /// Mean of the coil images.
  Vector image;
  int iterations = 0;
  bool converged = true;
  std::vector<double> objective_trace;
};

struct MriReport {
  MriConfig config;
  Vector truth;
  /// masks[i][l]: coil l at lines[i].
  std::vector<std::vector<std::vector<Index>>> masks;
  std::vector<MriOutcome> outcomes;

  const MriOutcome& find(const std::string& alg, Index lines) const;
};

/// Angle offset of coil l (0-based) for a pattern with n_lines lines.
double coil_angle_offset(Index l, Index L, Index n_lines);

MriReport run_parallel_mri(const MriConfig& cfg);

}  // namespace jsbl::experiments
