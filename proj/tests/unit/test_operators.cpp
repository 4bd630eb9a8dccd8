#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "jsbl/operators.hpp"

using namespace jsbl;

namespace {

// <A x, y> == <x, A^T y> for random x, y.
void expect_adjoint(const LinearMap& A, std::mt19937_64& g, double tol = 1e-10) {
  const Vector x = testutil::randn(A.cols(), g);
  const Vector y = testutil::randn(A.rows(), g);
  const double lhs = A.apply(x).dot(y);
  const double rhs = x.dot(A.adjoint_apply(y));
  EXPECT_NEAR(lhs, rhs, tol * (1.0 + std::abs(lhs)));
}

}  // namespace

TEST(Operators, IdentityAndDifference) {
  std::mt19937_64 g(1);
  const Vector x = testutil::randn(6, g);
  EXPECT_EQ(identity_operator(6).apply(x), x);
  const LinearMap D = difference_operator(6);
  EXPECT_EQ(D.rows(), 5);
  ASSERT_NE(D.sparse(), nullptr);
  const Vector d = D.apply(x);
  for (Index k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(d(k), x(k + 1) - x(k));
  EXPECT_TRUE(D.apply(Vector::Ones(6)).isZero());
  expect_adjoint(D, g);
}

TEST(Operators, BlurEntriesAndSymmetry) {
  const Index n = 40;
  const double gamma = 3e-2;
  const Matrix F = gaussian_blur_operator(n, gamma).to_dense();
  const double h = 1.0 / n;
  const double expect = h / (2.0 * std::numbers::pi * gamma * gamma) * std::exp(-(h * 3) * (h * 3) / (2 * gamma * gamma));
  EXPECT_NEAR(F(10, 13), expect, 1e-14 * expect);
  EXPECT_TRUE(F.isApprox(F.transpose(), 0.0));
  EXPECT_GT(F(5, 5), F(5, 6));
}

TEST(Operators, Gradient2dOrdering) {
  const Index nx = 3, ny = 4;
  const LinearMap G = gradient2d_operator(nx, ny);
  EXPECT_EQ(G.rows(), (nx - 1) * ny + nx * (ny - 1));
  EXPECT_EQ(G.cols(), nx * ny);
  Vector img(nx * ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) img(i + nx * j) = 10.0 * i + 100.0 * j;
  const Vector d = G.apply(img);
  const Index nv = (nx - 1) * ny;
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i + 1 < nx; ++i) EXPECT_DOUBLE_EQ(d(i + (nx - 1) * j), 10.0);
  for (Index j = 0; j + 1 < ny; ++j)
    for (Index i = 0; i < nx; ++i) EXPECT_DOUBLE_EQ(d(nv + i + nx * j), 100.0);
  std::mt19937_64 g(2);
  expect_adjoint(G, g);
}

TEST(Operators, DctOrthonormal) {
  const Matrix A = dct_matrix(16);
  EXPECT_TRUE((A * A.transpose()).isApprox(Matrix::Identity(16, 16), 1e-13));
  EXPECT_NEAR(A(0, 3), 1.0 / 4.0, 1e-15);
  EXPECT_NEAR(A(2, 1), std::sqrt(2.0 / 16) * std::cos(std::numbers::pi * 1.5 * 2 / 16), 1e-15);
}

TEST(Operators, SubsampledDct) {
  const std::vector<Index> omega{0, 5, 7};
  const LinearMap F = subsampled_dct_operator(16, omega);
  const Matrix A = dct_matrix(16);
  const Matrix Fd = F.to_dense();
  for (Index i = 0; i < 3; ++i) EXPECT_TRUE(Fd.row(i).isApprox(A.row(omega[i])));
  std::mt19937_64 g(3);
  expect_adjoint(F, g);
  EXPECT_TRUE(F.normal_diagonal().isApprox(Fd.colwise().squaredNorm().transpose()));
  const std::vector<Index> dup{1, 1};
  const std::vector<Index> bad{16};
  EXPECT_THROW(subsampled_dct_operator(16, dup), Error);
  try {
    subsampled_dct_operator(16, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(Operators, RadialMaskProperties) {
  const auto m = radial_sampling_mask(32, 8, 0.0);
  EXPECT_TRUE(std::is_sorted(m.begin(), m.end()));
  EXPECT_EQ(std::set<Index>(m.begin(), m.end()).size(), m.size());
  EXPECT_TRUE(std::binary_search(m.begin(), m.end(), mask_center_index(32)));
  // The horizontal line through the centre covers the whole centre row.
  for (Index col = 0; col < 32; ++col) EXPECT_TRUE(std::binary_search(m.begin(), m.end(), 16 + 32 * col));
  EXPECT_NE(radial_sampling_mask(32, 8, 0.1), m);
}

TEST(Operators, RadialMaskDensity256) {
  for (int l = 0; l < 4; ++l) {
    const auto m = radial_sampling_mask(256, 20, l * std::numbers::pi / 80.0);
    const double density = static_cast<double>(m.size()) / (256.0 * 256.0);
    EXPECT_NEAR(density, 0.16, 0.04);
  }
}

TEST(Operators, DftFullMaskIsUnitary) {
  const Index n = 8;
  std::vector<Index> all(n * n);
  std::iota(all.begin(), all.end(), Index{0});
  const ComplexLinearMap F = subsampled_dft_operator(all, n);
  const ComplexMatrix D = F.to_dense();
  EXPECT_TRUE((D.adjoint() * D).isApprox(ComplexMatrix::Identity(n * n, n * n), 1e-12));
  EXPECT_TRUE(F.column_sq_norms().isApproxToConstant(1.0));
  // A delta at pixel 0 has a flat spectrum 1/n.
  ComplexVector delta = ComplexVector::Zero(n * n);
  delta(0) = 1.0;
  const ComplexVector spec = F.apply(delta);
  for (Index i = 0; i < spec.size(); ++i) EXPECT_NEAR(std::abs(spec(i) - 1.0 / n), 0.0, 1e-14);
}

TEST(Operators, DftCentreIsDc) {
  const Index n = 8;
  const std::vector<Index> mask{mask_center_index(n)};
  const ComplexLinearMap F = subsampled_dft_operator(mask, n);
  const ComplexVector ones = ComplexVector::Ones(n * n);
  EXPECT_NEAR(std::abs(F.apply(ones)(0) - std::complex<double>(n, 0)), 0.0, 1e-12);
}

TEST(Operators, RealifyAdjoint) {
  const Index n = 8;
  const auto mask = radial_sampling_mask(n, 3, 0.2);
  const ComplexLinearMap F = subsampled_dft_operator(mask, n);
  const RealSystem sys = realify(F, ComplexVector::Zero(F.rows()));
  EXPECT_EQ(sys.map.rows(), 2 * F.rows());
  std::mt19937_64 g(4);
  expect_adjoint(sys.map, g);
  const Matrix Rd = sys.map.to_dense();
  EXPECT_TRUE(sys.map.normal_diagonal().isApprox(Rd.colwise().squaredNorm().transpose(), 1e-12));
  const Vector x = testutil::randn(n * n, g);
  const ComplexVector y = F.apply(x.cast<std::complex<double>>());
  const Vector yr = sys.map.apply(x);
  EXPECT_TRUE(yr.head(F.rows()).isApprox(y.real(), 1e-12));
  EXPECT_TRUE(yr.tail(F.rows()).isApprox(y.imag(), 1e-12));
}

TEST(Operators, WhitenDiagonalAndGeneral) {
  std::mt19937_64 g(5);
  const Matrix A = testutil::randn(4, 3, g);
  const Vector y = testutil::randn(4, g);
  const Vector var = testutil::positive(4, 0.5, 2.0, g);
  const RealSystem d = whiten(LinearMap::from_dense(A), y, Matrix(var.asDiagonal()));
  const Vector s = var.cwiseSqrt().cwiseInverse();
  EXPECT_TRUE(d.map.to_dense().isApprox(s.asDiagonal() * A));
  EXPECT_TRUE(d.data.isApprox(s.cwiseProduct(y)));
  const RealSystem id = whiten(LinearMap::from_dense(A), y, Matrix::Identity(4, 4));
  EXPECT_EQ(id.map.to_dense(), A);

  const Matrix B = testutil::randn(4, 4, g);
  const Matrix C = B * B.transpose() + Matrix::Identity(4, 4);
  const RealSystem w = whiten(LinearMap::from_dense(A), y, C);
  // Whitened normal equations reproduce the generalised least-squares ones.
  const Matrix Ci = C.inverse();
  EXPECT_TRUE((w.map.to_dense().transpose() * w.map.to_dense()).isApprox(A.transpose() * Ci * A, 1e-10));
  EXPECT_TRUE((w.map.to_dense().transpose() * w.data).isApprox(A.transpose() * Ci * y, 1e-10));
  EXPECT_THROW(whiten(LinearMap::from_dense(A), y, Matrix::Identity(3, 3)), Error);
}

TEST(Operators, RowScaledKeepsStructure) {
  const LinearMap D = difference_operator(5);
  const LinearMap S = row_scaled(D, Vector::Constant(4, 2.0));
  ASSERT_NE(S.sparse(), nullptr);
  EXPECT_TRUE(S.to_dense().isApprox(2.0 * D.to_dense()));
  const LinearMap T = row_scaled(subsampled_dct_operator(8, std::vector<Index>{1, 2}), Vector::Constant(2, 3.0));
  std::mt19937_64 g(6);
  expect_adjoint(T, g);
}

TEST(LinearMap, DimensionChecks) {
  const LinearMap A = LinearMap::from_dense(Matrix::Ones(2, 3));
  EXPECT_THROW(A.apply(Vector::Ones(2)), Error);
  EXPECT_THROW(A.adjoint_apply(Vector::Ones(3)), Error);
}
