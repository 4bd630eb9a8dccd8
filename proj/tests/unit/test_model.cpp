#include <gtest/gtest.h>

#include "jsbl/model.hpp"

using namespace jsbl;

TEST(AlgorithmSpec, NamesRoundTrip) {
  for (const char* n : {"ias", "gsbl", "mmv-ias", "mmv-gsbl"}) EXPECT_EQ(AlgorithmSpec::parse(n).name(), n);
  EXPECT_EQ(AlgorithmSpec::parse("mmv-ias").coupling, Coupling::Joint);
  EXPECT_EQ(AlgorithmSpec::parse("gsbl").coupling, Coupling::Separate);
  EXPECT_THROW(AlgorithmSpec::parse("ls"), Error);
}

TEST(Eta, Formula) {
  EXPECT_DOUBLE_EQ(eta(-1.0, 1.0, 4), -4.0);
  EXPECT_DOUBLE_EQ(eta(1.0, 3.0, 2), 1.0);
  EXPECT_EQ(coupled_count(Coupling::Joint, 5), 5);
  EXPECT_EQ(coupled_count(Coupling::Separate, 5), 1);
}

namespace {
MMVProblem small_problem() {
  MMVProblem p;
  p.sparsifier = LinearMap::from_dense(Matrix::Identity(3, 3));
  p.forward_ops = {LinearMap::from_dense(Matrix::Ones(2, 3)), LinearMap::from_dense(Matrix::Ones(4, 3))};
  p.measurements = {Vector::Zero(2), Vector::Zero(4)};
  return p;
}
}  // namespace

TEST(Validate, AcceptsConsistentProblem) { EXPECT_NO_THROW(validate(small_problem())); }

TEST(Validate, NamesOffendingShapes) {
  MMVProblem p = small_problem();
  p.forward_ops[1] = LinearMap::from_dense(Matrix::Ones(4, 5));
  try {
    validate(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    EXPECT_NE(std::string(e.what()).find("4x5"), std::string::npos);
  }
  p = small_problem();
  p.measurements[0] = Vector::Zero(3);
  EXPECT_THROW(validate(p), Error);
  p = small_problem();
  p.measurements.pop_back();
  EXPECT_THROW(validate(p), Error);
  p = small_problem();
  p.noise_cov = {Matrix::Identity(2, 2)};
  EXPECT_THROW(validate(p), Error);
}

TEST(Validate, HyperParameters) {
  const auto code = [](const HyperModelConfig& h, Index K, Index L) {
    try {
      validate_hyper(h, K, L);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;  // sentinel: no error
  };
  EXPECT_EQ(code(HyperModelConfig::ias(-1, 1, 1e-4, 3), 3, 4), ErrorCode::Io);
  EXPECT_EQ(code(HyperModelConfig::ias(0, 1, 1e-4, 3), 3, 4), ErrorCode::InvalidHyperParameter);
  EXPECT_EQ(code(HyperModelConfig::ias(-1, -1, 1e-4, 3), 3, 4), ErrorCode::InvalidHyperParameter);
  EXPECT_EQ(code(HyperModelConfig::ias(-1, 1, -1e-4, 3), 3, 4), ErrorCode::InvalidHyperParameter);
  EXPECT_EQ(code(HyperModelConfig::ias(-1, 1, 1e-4, 2), 3, 4), ErrorCode::InvalidHyperParameter);
  // r = 1 needs eta > 0: beta = 1, L = 4 gives eta = -2.
  EXPECT_EQ(code(HyperModelConfig::ias(1, 1, 1.0, 3), 3, 4), ErrorCode::InvalidHyperParameter);
  EXPECT_EQ(code(HyperModelConfig::ias(1, 4, 1.0, 3), 3, 4), ErrorCode::Io);
  // Separate coupling evaluates eta at L = 1.
  EXPECT_EQ(code(HyperModelConfig::ias(1, 2, 1.0, 3, Coupling::Separate), 3, 4), ErrorCode::Io);
  // GSBL shape L/2 - 1 + beta must be positive.
  EXPECT_EQ(code(HyperModelConfig::gsbl(0.4, 1.0, 3, Coupling::Separate), 3, 4), ErrorCode::InvalidHyperParameter);
  EXPECT_EQ(code(HyperModelConfig::gsbl(0.4, 1.0, 3, Coupling::Joint), 3, 4), ErrorCode::Io);
}

TEST(HyperModelConfig, GsblPinsR) {
  const auto h = HyperModelConfig::gsbl(1.0, 1e4, 5, Coupling::Joint, 2.0);
  EXPECT_EQ(h.r, 1.0);
  EXPECT_EQ(h.variant(), Variant::GSBL);
  EXPECT_EQ(h.vartheta.size(), 5);
}

TEST(SolverConfig, Validates) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.convergence_tol = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.outer_maxit = 0;
  EXPECT_THROW(c.validate(), Error);
}
