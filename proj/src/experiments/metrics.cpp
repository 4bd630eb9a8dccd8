#include <cmath>

#include "jsbl/experiments.hpp"

namespace jsbl::experiments {

double normalized_error(const std::vector<Vector>& truth, const std::vector<Vector>& estimate) {
  if (truth.size() != estimate.size())
    throw Error(ErrorCode::DimensionMismatch, "truth and estimate counts differ");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t l = 0; l < truth.size(); ++l) {
    if (truth[l].size() != estimate[l].size())
      throw Error(ErrorCode::DimensionMismatch, "truth and estimate lengths differ");
    num += (truth[l] - estimate[l]).squaredNorm();
    den += truth[l].squaredNorm();
  }
  if (den == 0.0) throw Error(ErrorCode::ZeroTruth, "truth is identically zero");
  return std::sqrt(num / den);
}

double relative_error(const Vector& truth, const Vector& estimate) {
  return normalized_error({truth}, {estimate});
}

double esp(const std::vector<TrialOutcome>& trials) {
  if (trials.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& t : trials) ok += t.success;
  return static_cast<double>(ok) / static_cast<double>(trials.size());
}

HyperModelConfig HyperDefaults::make(const AlgorithmSpec& alg, Index K) const {
  if (alg.variant == Variant::IAS) return HyperModelConfig::ias(ias_r, ias_beta, ias_vartheta, K, alg.coupling);
  return HyperModelConfig::gsbl(gsbl_beta, gsbl_vartheta, K, alg.coupling);
}

HyperDefaults signal_defaults() { return {-1.0, 1.0, 1e-4, 1.0, 1e4}; }
HyperDefaults imaging_defaults() { return {-1.0, 1.0, 1e-3, 1.0, 1e3}; }

std::vector<AlgorithmSpec> all_algorithms() {
  return {{Variant::IAS, Coupling::Separate},
          {Variant::IAS, Coupling::Joint},
          {Variant::GSBL, Coupling::Separate},
          {Variant::GSBL, Coupling::Joint}};
}

}  // namespace jsbl::experiments
