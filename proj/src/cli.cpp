#include "jsbl/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "jsbl/experiments.hpp"
#include "jsbl/inference.hpp"
#include "jsbl/io.hpp"
#include "jsbl/operators.hpp"
#include "jsbl/random.hpp"
#include "jsbl/uq.hpp"

namespace jsbl::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace jsbl::experiments;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string outdir = "out";
  int jobs = 0;
  double tol = 1e-4;
  int max_outer = 200;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Master random seed")->capture_default_str();
    app->add_option("--outdir", outdir, "Output directory")->capture_default_str();
    app->add_option("--jobs", jobs, "Worker threads (0: OpenMP default)")->capture_default_str()->check(CLI::NonNegativeNumber);
    app->add_option("--tol", tol, "Relative change in x that stops the outer loop")->capture_default_str();
    app->add_option("--max-outer", max_outer, "Outer iteration limit")->capture_default_str();
  }

  SolverConfig solver() const {
    SolverConfig c;
    c.convergence_tol = tol;
    c.outer_maxit = max_outer;
    c.seed = seed;
    c.validate();
    return c;
  }

  json to_json() const {
    return {{"seed", seed}, {"outdir", outdir}, {"jobs", jobs}, {"tol", tol}, {"max_outer", max_outer}};
  }
};

struct HyperFlags {
  HyperDefaults h;

  explicit HyperFlags(HyperDefaults d) : h(d) {}

  void attach(CLI::App* app) {
    app->add_option("--r", h.ias_r, "IAS hyper-prior exponent r")->capture_default_str();
    app->add_option("--beta", h.ias_beta, "IAS hyper-prior shape beta")->capture_default_str();
    app->add_option("--vartheta", h.ias_vartheta, "IAS hyper-prior scale vartheta")->capture_default_str();
    app->add_option("--gsbl-beta", h.gsbl_beta, "GSBL gamma shape beta")->capture_default_str();
    app->add_option("--gsbl-vartheta", h.gsbl_vartheta, "GSBL gamma scale vartheta")->capture_default_str();
  }

  json to_json() const {
    return {{"r", h.ias_r}, {"beta", h.ias_beta}, {"vartheta", h.ias_vartheta},
            {"gsbl_beta", h.gsbl_beta}, {"gsbl_vartheta", h.gsbl_vartheta}};
  }
};

std::vector<AlgorithmSpec> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<AlgorithmSpec> out;
  for (const auto& n : names) out.push_back(AlgorithmSpec::parse(n));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no algorithm selected");
  return out;
}

json names(const std::vector<AlgorithmSpec>& algs) {
  json j = json::array();
  for (const auto& a : algs) j.push_back(a.name());
  return j;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config, std::uint64_t seed,
                    const std::vector<std::string>& files) {
  io::write_json(dir / "manifest.json",
                 {{"command", command}, {"version", io::kVersion}, {"seed", seed}, {"config", config}, {"files", files}});
}

// ------------------------------------------------------------------ deblur

struct DeblurCmd {
  Common common;
  HyperFlags hyper{signal_defaults()};
  DeblurConfig cfg;
  std::vector<std::string> algs{"ias", "mmv-ias", "gsbl", "mmv-gsbl"};
  bool no_uq = false;

  void attach(CLI::App* app) {
    common.attach(app);
    hyper.attach(app);
    app->add_option("--L", cfg.L, "Number of signals")->capture_default_str();
    app->add_option("--n", cfg.n, "Grid points per signal")->capture_default_str();
    app->add_option("--edges", cfg.n_edges, "Jumps per signal")->capture_default_str();
    app->add_option("--gamma", cfg.gamma, "Blur kernel width")->capture_default_str();
    app->add_option("--sigma2", cfg.sigma2, "Noise variance")->capture_default_str();
    app->add_option("--algs", algs, "Algorithms to compare")->delimiter(',')->capture_default_str();
    app->add_flag("--no-uq", no_uq, "Skip posterior sampling and credible intervals");
    app->add_option("--samples", cfg.n_samples, "Posterior samples per signal")->capture_default_str();
    app->add_option("--level", cfg.level, "Credible interval level")->capture_default_str();
  }

  int run() {
    cfg.seed = common.seed;
    cfg.hyper = hyper.h;
    cfg.algorithms = parse_algorithms(algs);
    cfg.solver = common.solver();
    cfg.uq = !no_uq;
    const DeblurReport rep = run_deblurring(cfg);

    const fs::path dir = common.outdir;
    io::ensure_directory(dir);
    const double h = 1.0 / static_cast<double>(cfg.n);
    auto t_of = [&](Index i) { return (static_cast<double>(i) + 0.5) * h; };

    io::Table signals({"signal", "i", "t", "truth", "measurement"});
    for (Index l = 0; l < cfg.L; ++l)
      for (Index i = 0; i < cfg.n; ++i)
        signals.row().add(l + 1).add(i + 1).add(t_of(i)).add(rep.truth.signals[l](i)).add(rep.data[l](i));
    signals.write(dir / "signals.csv");

    io::Table edges({"edge"});
    for (Index k : rep.truth.edges) edges.row().add(k + 1);
    edges.write(dir / "edges.csv");

    io::Table errors({"algorithm", "signal", "rel_error"});
    io::Table estimates({"algorithm", "signal", "i", "t", "estimate", "ci_lo", "ci_hi"});
    io::Table theta({"algorithm", "row", "k", "normalized_theta"});
    io::Table trace({"algorithm", "step", "objective"});
    for (const auto& o : rep.outcomes) {
      const std::string name = o.algorithm.name();
      for (Index l = 0; l < cfg.L; ++l) {
        errors.row().add(name).add(l + 1).add(o.rel_errors[l]);
        for (Index i = 0; i < cfg.n; ++i) {
          estimates.row().add(name).add(l + 1).add(i + 1).add(t_of(i)).add(o.result.x_hat[l](i));
          if (cfg.uq)
            estimates.add(o.intervals[l].lo(i)).add(o.intervals[l].hi(i));
          else
            estimates.add(std::string()).add(std::string());
        }
      }
      for (Index r = 0; r < o.theta_profile.rows(); ++r)
        for (Index k = 0; k < o.theta_profile.cols(); ++k) theta.row().add(name).add(r + 1).add(k + 1).add(o.theta_profile(r, k));
      for (std::size_t s = 0; s < o.result.objective_trace.size(); ++s)
        trace.row().add(name).add(static_cast<Index>(s + 1)).add(o.result.objective_trace[s]);
    }
    errors.write(dir / "errors.csv");
    estimates.write(dir / "estimates.csv");
    theta.write(dir / "theta.csv");
    trace.write(dir / "trace.csv");

    json c = {{"n", cfg.n}, {"L", cfg.L}, {"edges", cfg.n_edges}, {"gamma", cfg.gamma}, {"sigma2", cfg.sigma2},
              {"algorithms", names(cfg.algorithms)}, {"uq", cfg.uq}, {"samples", cfg.n_samples}, {"level", cfg.level},
              {"hyper", hyper.to_json()}, {"common", common.to_json()}};
    write_manifest(dir, "deblur", c, cfg.seed,
                   {"signals.csv", "edges.csv", "errors.csv", "estimates.csv", "theta.csv", "trace.csv"});
    for (const auto& o : rep.outcomes) {
      double mean = 0.0;
      for (double e : o.rel_errors) mean += e;
      std::cout << o.algorithm.name() << " mean relative error " << io::format_double(mean / cfg.L) << '\n';
    }
    return Ok;
  }
};

// ----------------------------------------------------------------- success

struct SuccessCmd {
  Common common;
  HyperFlags hyper{signal_defaults()};
  SuccessConfig cfg;
  std::vector<std::string> algs{"ias", "mmv-ias"};

  void attach(CLI::App* app) {
    common.attach(app);
    hyper.attach(app);
    app->add_option("--L", cfg.L_values, "Numbers of signals to sweep")->delimiter(',')->capture_default_str();
    app->add_option("--M", cfg.M_grid, "Measurement counts to sweep")->delimiter(',')->capture_default_str();
    app->add_option("--N", cfg.N, "Signal length")->capture_default_str();
    app->add_option("--s", cfg.s, "Nonzeros per signal")->capture_default_str();
    app->add_option("--trials", cfg.T, "Trials per condition")->capture_default_str();
    app->add_option("--sigma2", cfg.sigma2, "Noise variance")->capture_default_str();
    app->add_option("--eps-tol", cfg.eps_tol, "Success threshold on the normalized error")->capture_default_str();
    app->add_option("--algs", algs, "Algorithms to compare")->delimiter(',')->capture_default_str();
  }

  int run() {
    cfg.seed = common.seed;
    cfg.hyper = hyper.h;
    cfg.algorithms = parse_algorithms(algs);
    cfg.solver = common.solver();
    cfg.jobs = common.jobs;
    const SuccessReport rep = run_success_analysis(cfg);

    const fs::path dir = common.outdir;
    io::ensure_directory(dir);
    io::Table table({"algorithm", "L", "M", "avg_error", "esp"});
    io::Table trials({"algorithm", "L", "M", "trial", "error", "success"});
    for (const auto& r : rep.rows) {
      table.row().add(r.algorithm.name()).add(r.L).add(r.M).add(r.avg_error).add(r.esp);
      for (std::size_t t = 0; t < r.trials.size(); ++t)
        trials.row().add(r.algorithm.name()).add(r.L).add(r.M).add(static_cast<Index>(t + 1)).add(r.trials[t].error).add(
            static_cast<Index>(r.trials[t].success));
    }
    table.write(dir / "success.csv");
    trials.write(dir / "trials.csv");
    json c = {{"N", cfg.N}, {"s", cfg.s}, {"T", cfg.T}, {"sigma2", cfg.sigma2}, {"eps_tol", cfg.eps_tol},
              {"M", cfg.M_grid}, {"L", cfg.L_values}, {"algorithms", names(cfg.algorithms)},
              {"hyper", hyper.to_json()}, {"common", common.to_json()}};
    write_manifest(dir, "success", c, cfg.seed, {"success.csv", "trials.csv"});
    for (Index L : cfg.L_values)
      for (const auto& a : cfg.algorithms)
        std::cout << a.name() << " L=" << L << " smallest M with ESP=1: " << rep.smallest_full_success(a, L) << '\n';
    return Ok;
  }
};

// ------------------------------------------------------------------- phase

struct PhaseCmd {
  Common common;
  HyperFlags hyper{signal_defaults()};
  PhaseConfig cfg;
  std::string algorithm = "mmv-ias";

  void attach(CLI::App* app) {
    common.attach(app);
    hyper.attach(app);
    app->add_option("--algorithm", algorithm, "Algorithm")->capture_default_str();
    app->add_option("--L", cfg.L, "Number of signals")->capture_default_str();
    app->add_option("--N", cfg.N, "Signal length")->capture_default_str();
    app->add_option("--stride", cfg.stride, "Grid stride on both axes")->capture_default_str();
    app->add_option("--trials", cfg.T, "Trials per cell")->capture_default_str();
    app->add_option("--sigma2", cfg.sigma2, "Noise variance")->capture_default_str();
    app->add_option("--eps-tol", cfg.eps_tol, "Success threshold on the normalized error")->capture_default_str();
  }

  int run() {
    cfg.seed = common.seed;
    cfg.hyper = hyper.h;
    cfg.algorithm = AlgorithmSpec::parse(algorithm);
    cfg.solver = common.solver();
    cfg.jobs = common.jobs;
    const PhaseReport rep = run_phase_transition(cfg);

    const fs::path dir = common.outdir;
    io::ensure_directory(dir);
    io::Table table({"algorithm", "L", "s", "M", "esp"});
    for (std::size_t i = 0; i < rep.s_axis.size(); ++i)
      for (std::size_t k = 0; k < rep.M_axis.size(); ++k)
        table.row()
            .add(cfg.algorithm.name())
            .add(cfg.L)
            .add(rep.s_axis[i])
            .add(rep.M_axis[k])
            .add(rep.esp(static_cast<Index>(i), static_cast<Index>(k)));
    table.write(dir / "phase.csv");
    json c = {{"algorithm", cfg.algorithm.name()}, {"L", cfg.L}, {"N", cfg.N}, {"stride", cfg.stride}, {"T", cfg.T},
              {"sigma2", cfg.sigma2}, {"eps_tol", cfg.eps_tol}, {"hyper", hyper.to_json()},
              {"common", common.to_json()}};
    write_manifest(dir, "phase", c, cfg.seed, {"phase.csv"});
    return Ok;
  }
};

// --------------------------------------------------------------------- mri

struct MriCmd {
  Common common;
  HyperFlags hyper{imaging_defaults()};
  MriConfig cfg;
  bool full_scale = false;

  MriCmd() { cfg.lines = {4, 8, 12, 16, 20}; }

  void attach(CLI::App* app) {
    common.attach(app);
    hyper.attach(app);
    app->add_option("--L", cfg.L, "Number of coils")->capture_default_str();
    app->add_option("--n", cfg.n, "Image side length")->capture_default_str();
    app->add_flag("--full-scale", full_scale, "Use a 256x256 phantom");
    app->add_option("--lines", cfg.lines, "Radial lines per coil (sweep)")->delimiter(',')->capture_default_str();
    app->add_option("--sigma2", cfg.sigma2, "Noise variance per real component")->capture_default_str();
    app->add_option("--algs", cfg.algorithms, "Methods: ls, ias, gsbl, mmv-ias, mmv-gsbl")
        ->delimiter(',')
        ->capture_default_str();
  }

  int run() {
    if (full_scale) cfg.n = 256;
    cfg.seed = common.seed;
    cfg.hyper = hyper.h;
    cfg.solver = common.solver();
    const MriReport rep = run_parallel_mri(cfg);

    const fs::path dir = common.outdir;
    io::ensure_directory(dir / "images");
    io::ensure_directory(dir / "masks");
    std::vector<std::string> files{"mri_errors.csv", "coil_errors.csv", "images/truth.csv"};
    auto image = [&](const Vector& v) { return Matrix(Eigen::Map<const Matrix>(v.data(), cfg.n, cfg.n)); };
    io::write_matrix_csv(dir / "images" / "truth.csv", image(rep.truth));

    io::Table errors({"algorithm", "lines", "overall_error"});
    io::Table coils({"algorithm", "lines", "coil", "rel_error"});
    for (const auto& o : rep.outcomes) {
      errors.row().add(o.algorithm).add(o.lines).add(o.overall_error);
      for (std::size_t l = 0; l < o.coil_errors.size(); ++l)
        coils.row().add(o.algorithm).add(o.lines).add(static_cast<Index>(l + 1)).add(o.coil_errors[l]);
      const std::string f = "images/" + o.algorithm + "_lines" + std::to_string(o.lines) + ".csv";
      io::write_matrix_csv(dir / f, image(o.image));
      files.push_back(f);
    }
    errors.write(dir / "mri_errors.csv");
    coils.write(dir / "coil_errors.csv");
    for (std::size_t i = 0; i < cfg.lines.size(); ++i)
      for (std::size_t l = 0; l < rep.masks[i].size(); ++l) {
        const std::string f =
            "masks/coil" + std::to_string(l + 1) + "_lines" + std::to_string(cfg.lines[i]) + ".csv";
        io::write_index_set(dir / f, rep.masks[i][l]);
        files.push_back(f);
      }
    json c = {{"n", cfg.n}, {"L", cfg.L}, {"lines", cfg.lines}, {"sigma2", cfg.sigma2},
              {"algorithms", cfg.algorithms}, {"hyper", hyper.to_json()}, {"common", common.to_json()}};
    write_manifest(dir, "mri", c, cfg.seed, files);
    for (const auto& o : rep.outcomes)
      std::cout << o.algorithm << " lines=" << o.lines << " overall error " << io::format_double(o.overall_error)
                << '\n';
    return Ok;
  }
};

// ------------------------------------------------------------------- solve

struct SolveCmd {
  Common common;
  HyperFlags hyper{signal_defaults()};
  std::string algorithm = "mmv-ias";
  std::vector<std::string> F_files, y_files, cov_files;
  std::string R_file;
  bool uq = false;
  Index samples = 1000;
  double level = 0.999;

  void attach(CLI::App* app) {
    common.attach(app);
    hyper.attach(app);
    app->add_option("--algorithm", algorithm, "ias, gsbl, mmv-ias, mmv-gsbl or ls")->capture_default_str();
    app->add_option("--F", F_files, "Forward operator CSV per signal (row-major, no header)")->delimiter(',');
    app->add_option("--y", y_files, "Measurement CSV per signal")->delimiter(',');
    app->add_option("--R", R_file, "Sparsifying operator CSV");
    app->add_option("--noise-cov", cov_files, "Noise covariance CSV per signal (optional)")->delimiter(',');
    app->add_flag("--uq", uq, "Write posterior samples and credible intervals");
    app->add_option("--samples", samples, "Posterior samples per signal")->capture_default_str();
    app->add_option("--level", level, "Credible interval level")->capture_default_str();
  }

  int run() {
    if (R_file.empty()) throw Error(ErrorCode::InvalidArgument, "missing sparsifying operator (--R)");
    if (F_files.empty()) throw Error(ErrorCode::InvalidArgument, "missing forward operators (--F)");
    if (F_files.size() != y_files.size())
      throw Error(ErrorCode::DimensionMismatch, std::to_string(F_files.size()) + " forward operators but " +
                                                    std::to_string(y_files.size()) + " measurement files");
    if (!cov_files.empty() && cov_files.size() != F_files.size())
      throw Error(ErrorCode::DimensionMismatch, "need one noise covariance per signal");
    MMVProblem problem;
    problem.sparsifier = LinearMap::from_dense(io::read_matrix_csv(R_file));
    for (std::size_t l = 0; l < F_files.size(); ++l) {
      problem.forward_ops.push_back(LinearMap::from_dense(io::read_matrix_csv(F_files[l])));
      problem.measurements.push_back(io::read_vector_csv(y_files[l]));
      if (!cov_files.empty()) problem.noise_cov.emplace_back(io::read_matrix_csv(cov_files[l]));
    }
    validate(problem);
    const SolverConfig solver = common.solver();
    const fs::path dir = common.outdir;
    std::vector<std::string> files{"x_hat.csv"};
    Matrix X(problem.signal_size(), problem.num_vectors());

    if (algorithm == "ls") {
      const auto xs = least_squares_baseline(problem);
      for (std::size_t l = 0; l < xs.size(); ++l) X.col(static_cast<Index>(l)) = xs[l];
      io::ensure_directory(dir);
    } else {
      const AlgorithmSpec spec = AlgorithmSpec::parse(algorithm);
      const HyperModelConfig h = hyper.h.make(spec, problem.sparse_size());
      validate(problem, h);
      const RecoveryResult res = jsbl::run(problem, h, solver);
      for (std::size_t l = 0; l < res.x_hat.size(); ++l) X.col(static_cast<Index>(l)) = res.x_hat[l];
      io::ensure_directory(dir);
      io::write_matrix_csv(dir / "theta.csv", res.theta_hat);
      io::Table trace({"step", "objective"});
      for (std::size_t s = 0; s < res.objective_trace.size(); ++s)
        trace.row().add(static_cast<Index>(s + 1)).add(res.objective_trace[s]);
      trace.write(dir / "trace.csv");
      files.insert(files.end(), {"theta.csv", "trace.csv"});
      if (uq) {
        if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "--level must lie in (0, 1)");
        const MMVProblem white = problem.has_noise_cov() ? whiten_problem(problem) : problem;
        for (Index l = 0; l < problem.num_vectors(); ++l) {
          const Index row = res.theta_hat.rows() == 1 ? 0 : l;
          const auto post = conditional_posterior(white.forward_ops[l], white.measurements[l], white.sparsifier,
                                                  res.theta_hat.row(row).transpose(), spec.variant);
          const Matrix draws = sample_posterior(post, samples, derive_seed(common.seed, {static_cast<std::uint64_t>(l)}));
          const CredibleIntervals ci = credible_intervals(draws, level);
          const std::string sf = "samples_" + std::to_string(l + 1) + ".csv";
          const std::string cf = "intervals_" + std::to_string(l + 1) + ".csv";
          io::write_matrix_csv(dir / sf, draws);
          io::Table t({"index", "mean", "lo", "hi"});
          for (Index k = 0; k < ci.lo.size(); ++k) t.row().add(k + 1).add(post.mean(k)).add(ci.lo(k)).add(ci.hi(k));
          t.write(dir / cf);
          files.insert(files.end(), {sf, cf});
        }
      }
    }
    io::write_matrix_csv(dir / "x_hat.csv", X);
    json c = {{"algorithm", algorithm}, {"F", F_files}, {"y", y_files}, {"R", R_file}, {"noise_cov", cov_files},
              {"uq", uq}, {"samples", samples}, {"level", level}, {"hyper", hyper.to_json()},
              {"common", common.to_json()}};
    write_manifest(dir, "solve", c, common.seed, files);
    return Ok;
  }
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularSystem:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::NoPositiveRoot:
    case ErrorCode::NonPositiveTheta:
      return RuntimeFailure;
    default:
      return ValidationError;
  }
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv) {
  CLI::App app{"Joint-sparsity recovery of multiple measurement vectors"};
  app.require_subcommand(1);
  DeblurCmd deblur;
  SuccessCmd success;
  PhaseCmd phase;
  MriCmd mri;
  SolveCmd solve;
  deblur.attach(app.add_subcommand("deblur", "Piecewise-constant signal deblurring comparison"));
  success.attach(app.add_subcommand("success", "Average error and success probability over M"));
  phase.attach(app.add_subcommand("phase", "Success probability over the (s, M) plane"));
  mri.attach(app.add_subcommand("mri", "Coil-by-coil radial MRI reconstruction"));
  solve.attach(app.add_subcommand("solve", "Recover x_1..x_L from CSV operators and data"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "jsbl: usage error: " << one_line(e.what()) << '\n';
    return UsageError;
  }

  try {
    for (const Common* c : {&deblur.common, &success.common, &phase.common, &mri.common, &solve.common})
      if (c->jobs > 0) omp_set_num_threads(c->jobs);
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "deblur") return deblur.run();
    if (name == "success") return success.run();
    if (name == "phase") return phase.run();
    if (name == "mri") return mri.run();
    return solve.run();
  } catch (const Error& e) {
    std::cerr << "jsbl: error: " << one_line(e.what()) << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "jsbl: error: " << one_line(e.what()) << '\n';
    return RuntimeFailure;
  }
}

int parse_and_dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_and_dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace jsbl::cli
