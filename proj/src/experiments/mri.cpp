#include <cmath>
#include <numbers>
#include <random>

#include "jsbl/experiments.hpp"
#include "jsbl/inference.hpp"
#include "jsbl/operators.hpp"
#include "jsbl/random.hpp"

namespace jsbl::experiments {

const MriOutcome& MriReport::find(const std::string& alg, Index lines) const {
  for (const auto& o : outcomes)
    if (o.algorithm == alg && o.lines == lines) return o;
  throw Error(ErrorCode::InvalidArgument, "no MRI outcome for " + alg + " at " + std::to_string(lines) + " lines");
}

double coil_angle_offset(Index l, Index L, Index n_lines) {
  return static_cast<double>(l) * std::numbers::pi / static_cast<double>(L * n_lines);
}

MriReport run_parallel_mri(const MriConfig& cfg) {
  if (cfg.sigma2 <= 0.0) throw Error(ErrorCode::InvalidArgument, "sigma2 must be positive");
  if (cfg.L < 1) throw Error(ErrorCode::InvalidArgument, "need at least one coil");
  for (const auto& a : cfg.algorithms)
    if (a != "ls") AlgorithmSpec::parse(a);

  MriReport rep;
  rep.config = cfg;
  rep.truth = shepp_logan(cfg.n);
  const LinearMap R = gradient2d_operator(cfg.n, cfg.n);
  const double sigma = std::sqrt(cfg.sigma2);
  const ComplexVector xc = rep.truth.cast<std::complex<double>>();

  for (Index nl : cfg.lines) {
    MMVProblem problem;
    problem.sparsifier = R;
    std::vector<std::vector<Index>> masks;
    for (Index l = 0; l < cfg.L; ++l) {
      auto mask = radial_sampling_mask(cfg.n, nl, coil_angle_offset(l, cfg.L, nl));
      const ComplexLinearMap Fc = subsampled_dft_operator(mask, cfg.n);
      RealSystem sys = realify(Fc, Fc.apply(xc));
      std::mt19937_64 gen(derive_seed(cfg.seed, {static_cast<std::uint64_t>(nl), static_cast<std::uint64_t>(l)}));
      std::normal_distribution<double> normal;
      for (Index i = 0; i < sys.data.size(); ++i) sys.data(i) += sigma * normal(gen);
      // Whitened directly: the covariance is sigma^2 I.
      problem.forward_ops.push_back(row_scaled(sys.map, Vector::Constant(sys.map.rows(), 1.0 / sigma)));
      problem.measurements.push_back(sys.data / sigma);
      masks.push_back(std::move(mask));
    }
    rep.masks.push_back(std::move(masks));

    for (const auto& name : cfg.algorithms) {
      MriOutcome out;
      out.algorithm = name;
      out.lines = nl;
      std::vector<Vector> coils;
      if (name == "ls") {
        coils = least_squares_baseline(problem, cfg.solver.execution);
      } else {
        const RecoveryResult r = run(problem, cfg.hyper.make(AlgorithmSpec::parse(name), R.rows()), cfg.solver);
        coils = r.x_hat;
        out.iterations = r.iterations;
        out.converged = r.converged;
        out.objective_trace = r.objective_trace;
      }
      out.image = Vector::Zero(rep.truth.size());
      for (const auto& c : coils) {
        out.coil_errors.push_back(relative_error(rep.truth, c));
        out.image += c;
      }
      out.image /= static_cast<double>(coils.size());
      out.overall_error = relative_error(rep.truth, out.image);
      out.coil_images = std::move(coils);
      rep.outcomes.push_back(std::move(out));
    }
  }
  return rep;
}

}  // namespace jsbl::experiments
