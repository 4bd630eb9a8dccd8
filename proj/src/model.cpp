#include "jsbl/model.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace jsbl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidHyperParameter: return "InvalidHyperParameter";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveTheta: return "NonPositiveTheta";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorCode::InvalidEta: return "InvalidEta";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::ZeroTruth: return "ZeroTruth";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string AlgorithmSpec::name() const {
  std::string base = variant == Variant::IAS ? "ias" : "gsbl";
  return coupling == Coupling::Joint ? "mmv-" + base : base;
}

AlgorithmSpec AlgorithmSpec::parse(std::string_view name) {
  if (name == "ias") return {Variant::IAS, Coupling::Separate};
  if (name == "gsbl") return {Variant::GSBL, Coupling::Separate};
  if (name == "mmv-ias") return {Variant::IAS, Coupling::Joint};
  if (name == "mmv-gsbl") return {Variant::GSBL, Coupling::Joint};
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

bool MMVProblem::has_noise_cov() const {
  for (const auto& c : noise_cov)
    if (c) return true;
  return false;
}

HyperModelConfig HyperModelConfig::ias(double r, double beta, Vector vartheta, Coupling coupling) {
  HyperModelConfig h;
  h.algorithm = {Variant::IAS, coupling};
  h.r = r;
  h.beta = beta;
  h.vartheta = std::move(vartheta);
  return h;
}

HyperModelConfig HyperModelConfig::ias(double r, double beta, double vartheta, Index K,
                                       Coupling coupling) {
  return ias(r, beta, Vector::Constant(K, vartheta), coupling);
}

HyperModelConfig HyperModelConfig::gsbl(double beta, Vector vartheta, Coupling coupling,
                                        std::optional<double> r) {
  if (r && *r != 1.0)
    std::clog << "warning: r=" << *r << " ignored for GSBL (gamma hyper-prior uses r=1)\n";
  HyperModelConfig h;
  h.algorithm = {Variant::GSBL, coupling};
  h.r = 1.0;
  h.beta = beta;
  h.vartheta = std::move(vartheta);
  return h;
}

HyperModelConfig HyperModelConfig::gsbl(double beta, double vartheta, Index K, Coupling coupling,
                                        std::optional<double> r) {
  return gsbl(beta, Vector::Constant(K, vartheta), coupling, r);
}

void SolverConfig::validate() const {
  if (!(inner_tol > 0) || !(convergence_tol > 0))
    throw Error(ErrorCode::InvalidArgument, "solver tolerances must be positive");
  if (inner_maxit < 1 || outer_maxit < 1)
    throw Error(ErrorCode::InvalidArgument, "iteration counts must be at least 1");
}

double eta(double r, double beta, Index L) {
  return r * beta - (static_cast<double>(L) / 2.0 + 1.0);
}

Index coupled_count(Coupling coupling, Index L) { return coupling == Coupling::Joint ? L : 1; }

namespace {

std::string shape(Index r, Index c) {
  std::ostringstream os;
  os << r << "x" << c;
  return os.str();
}

}  // namespace

void validate(const MMVProblem& p) {
  const Index L = p.num_vectors();
  if (L < 1) throw Error(ErrorCode::DimensionMismatch, "need at least one measurement vector");
  if (static_cast<Index>(p.measurements.size()) != L)
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(L) + " forward operators but " +
                    std::to_string(p.measurements.size()) + " measurement vectors");
  const Index N = p.forward_ops[0].cols();
  for (Index l = 0; l < L; ++l) {
    const auto& F = p.forward_ops[l];
    if (F.cols() != N)
      throw Error(ErrorCode::DimensionMismatch,
                  "forward operator " + std::to_string(l + 1) + " is " + shape(F.rows(), F.cols()) +
                      " but operator 1 has " + std::to_string(N) + " columns");
    if (p.measurements[l].size() != F.rows())
      throw Error(ErrorCode::DimensionMismatch,
                  "measurement vector " + std::to_string(l + 1) + " has length " +
                      std::to_string(p.measurements[l].size()) + " but forward operator is " +
                      shape(F.rows(), F.cols()));
  }
  if (p.sparsifier.cols() != N)
    throw Error(ErrorCode::DimensionMismatch,
                "sparsifier is " + shape(p.sparsifier.rows(), p.sparsifier.cols()) +
                    " but forward operators have " + std::to_string(N) + " columns");
  if (!p.noise_cov.empty()) {
    if (static_cast<Index>(p.noise_cov.size()) != L)
      throw Error(ErrorCode::DimensionMismatch, "noise covariance list must have one entry per signal");
    for (Index l = 0; l < L; ++l) {
      const auto& c = p.noise_cov[l];
      if (c && (c->rows() != p.measurements[l].size() || c->cols() != c->rows()))
        throw Error(ErrorCode::DimensionMismatch,
                    "noise covariance " + std::to_string(l + 1) + " is " + shape(c->rows(), c->cols()) +
                        " but measurement length is " + std::to_string(p.measurements[l].size()));
    }
  }
}

void validate_hyper_basic(const HyperModelConfig& h, Index K) {
  if (h.r == 0.0 || !std::isfinite(h.r))
    throw Error(ErrorCode::InvalidHyperParameter, "r must be a finite nonzero number");
  if (!(h.beta > 0.0)) throw Error(ErrorCode::InvalidHyperParameter, "beta must be positive");
  if (h.vartheta.size() != K)
    throw Error(ErrorCode::InvalidHyperParameter,
                "vartheta has length " + std::to_string(h.vartheta.size()) + ", expected " +
                    std::to_string(K));
  if (!(h.vartheta.array() > 0.0).all())
    throw Error(ErrorCode::InvalidHyperParameter, "vartheta must be elementwise positive");
}

void validate_hyper(const HyperModelConfig& h, Index K, Index L) {
  validate_hyper_basic(h, K);
  const Index Lc = coupled_count(h.coupling(), L);
  if (h.variant() == Variant::IAS) {
    const double e = eta(h.r, h.beta, Lc);
    if (h.r == 1.0 && !(e > 0.0))
      throw Error(ErrorCode::InvalidHyperParameter,
                  "r=1 requires eta > 0 but eta = " + std::to_string(e));
    if (h.r == -1.0 && !(e < 0.0))
      throw Error(ErrorCode::InvalidHyperParameter,
                  "r=-1 requires eta < 0 but eta = " + std::to_string(e));
  } else {
    const double shape_param = static_cast<double>(Lc) / 2.0 - 1.0 + h.beta;
    if (!(shape_param > 0.0))
      throw Error(ErrorCode::InvalidHyperParameter, "GSBL requires L/2 - 1 + beta > 0");
  }
}

void validate(const MMVProblem& problem, const HyperModelConfig& hyper) {
  validate(problem);
  validate_hyper(hyper, problem.sparse_size(), problem.num_vectors());
}

}  // namespace jsbl
