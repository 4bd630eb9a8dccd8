#include "jsbl/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "jsbl/errors.hpp"

namespace jsbl {

namespace {

using Complex = std::complex<double>;

// Rows of an orthogonal transform, kept as a dense block.
class SelectedRowsImpl final : public LinearMap::Impl {
 public:
  explicit SelectedRowsImpl(Matrix rows) : m_(std::move(rows)) {}
  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }
  Representation representation() const override { return Representation::Transform; }
  void apply(const Vector& x, Vector& out) const override { out.noalias() = m_ * x; }
  void adjoint_apply(const Vector& y, Vector& out) const override {
    out.noalias() = m_.transpose() * y;
  }
  Matrix to_dense() const override { return m_; }
  Vector normal_diagonal() const override { return m_.colwise().squaredNorm().transpose(); }
  const Matrix* dense() const override { return &m_; }

 private:
  Matrix m_;
};

class SubsampledDftImpl final : public ComplexLinearMap::Impl {
 public:
  SubsampledDftImpl(std::span<const Index> mask, Index n) : n_(n), w_(n, n) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        // j*k mod n keeps the phase argument small and exact.
        const double phase = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / n;
        w_(j, k) = std::polar(scale, phase);
      }
    w_conj_ = w_.conjugate();
    const Index c = n / 2;
    freq_.reserve(mask.size());
    for (Index idx : mask) {
      const Index row = idx % n;
      const Index col = idx / n;
      freq_.emplace_back(((row - c) % n + n) % n, ((col - c) % n + n) % n);
    }
  }

  Index rows() const override { return static_cast<Index>(freq_.size()); }
  Index cols() const override { return n_ * n_; }

  void apply(const ComplexVector& x, ComplexVector& out) const override {
    Eigen::Map<const ComplexMatrix> img(x.data(), n_, n_);
    ComplexMatrix tmp = w_ * img;
    ComplexMatrix spec = tmp * w_;
    out.resize(rows());
    for (Index i = 0; i < rows(); ++i) out(i) = spec(freq_[i].first, freq_[i].second);
  }

  void adjoint_apply(const ComplexVector& y, ComplexVector& out) const override {
    ComplexMatrix spec = ComplexMatrix::Zero(n_, n_);
    for (Index i = 0; i < rows(); ++i) spec(freq_[i].first, freq_[i].second) += y(i);
    ComplexMatrix tmp = w_conj_ * spec;
    out.resize(cols());
    Eigen::Map<ComplexMatrix>(out.data(), n_, n_).noalias() = tmp * w_conj_;
  }

  Vector column_sq_norms() const override {
    return Vector::Constant(cols(), static_cast<double>(rows()) / static_cast<double>(cols()));
  }

 private:
  Index n_;
  ComplexMatrix w_;
  ComplexMatrix w_conj_;
  std::vector<std::pair<Index, Index>> freq_;
};

class RealifiedImpl final : public LinearMap::Impl {
 public:
  explicit RealifiedImpl(ComplexLinearMap map) : map_(std::move(map)) {}
  Index rows() const override { return 2 * map_.rows(); }
  Index cols() const override { return map_.cols(); }
  Representation representation() const override { return Representation::Transform; }
  void apply(const Vector& x, Vector& out) const override {
    const ComplexVector z = map_.apply(x.cast<Complex>());
    const Index m = z.size();
    out.resize(2 * m);
    out.head(m) = z.real();
    out.tail(m) = z.imag();
  }
  void adjoint_apply(const Vector& y, Vector& out) const override {
    const Index m = map_.rows();
    ComplexVector z(m);
    z.real() = y.head(m);
    z.imag() = y.tail(m);
    out = map_.adjoint_apply(z).real();
  }
  Vector normal_diagonal() const override { return map_.column_sq_norms(); }

 private:
  ComplexLinearMap map_;
};

class RowScaledImpl final : public LinearMap::Impl {
 public:
  RowScaledImpl(LinearMap inner, Vector scale) : inner_(std::move(inner)), scale_(std::move(scale)) {}
  Index rows() const override { return inner_.rows(); }
  Index cols() const override { return inner_.cols(); }
  Representation representation() const override { return inner_.representation(); }
  void apply(const Vector& x, Vector& out) const override {
    out = scale_.cwiseProduct(inner_.apply(x));
  }
  void adjoint_apply(const Vector& y, Vector& out) const override {
    out = inner_.adjoint_apply(scale_.cwiseProduct(y));
  }
  Matrix to_dense() const override { return scale_.asDiagonal() * inner_.to_dense(); }
  Vector normal_diagonal() const override {
    if (scale_.size() > 0 && (scale_.array() == scale_(0)).all())
      return scale_(0) * scale_(0) * inner_.normal_diagonal();
    return to_dense().colwise().squaredNorm().transpose();
  }

 private:
  LinearMap inner_;
  Vector scale_;
};

void check_index_set(std::span<const Index> idx, Index bound, const char* what) {
  if (idx.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is empty");
  std::vector<char> seen(static_cast<std::size_t>(bound), 0);
  for (Index i : idx) {
    if (i < 0 || i >= bound)
      throw Error(ErrorCode::IndexOutOfRange, std::string(what) + " index " + std::to_string(i) +
                                                  " outside [0, " + std::to_string(bound) + ")");
    if (seen[static_cast<std::size_t>(i)]++)
      throw Error(ErrorCode::InvalidArgument,
                  std::string(what) + " has duplicate index " + std::to_string(i));
  }
}

}  // namespace

LinearMap identity_operator(Index n) {
  SparseMatrix I(n, n);
  I.setIdentity();
  return LinearMap::from_sparse(std::move(I));
}

LinearMap gaussian_blur_operator(Index n, double gamma) {
  if (n < 2 || !(gamma > 0))
    throw Error(ErrorCode::InvalidArgument, "blur operator needs n >= 2 and gamma > 0");
  const double h = 1.0 / static_cast<double>(n);
  const double norm = 1.0 / (2.0 * std::numbers::pi * gamma * gamma);
  Matrix F(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double s = h * static_cast<double>(i - j);
      F(i, j) = h * norm * std::exp(-s * s / (2.0 * gamma * gamma));
    }
  return LinearMap::from_dense(std::move(F));
}

LinearMap difference_operator(Index n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "difference operator needs n >= 2");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(2 * (n - 1)));
  for (Index k = 0; k + 1 < n; ++k) {
    t.emplace_back(k, k, -1.0);
    t.emplace_back(k, k + 1, 1.0);
  }
  SparseMatrix D(n - 1, n);
  D.setFromTriplets(t.begin(), t.end());
  return LinearMap::from_sparse(std::move(D));
}

LinearMap gradient2d_operator(Index nx, Index ny) {
  if (nx < 2 || ny < 2) throw Error(ErrorCode::InvalidArgument, "gradient needs nx, ny >= 2");
  const Index n_vert = (nx - 1) * ny;
  const Index n_horz = nx * (ny - 1);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(2 * (n_vert + n_horz)));
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i + 1 < nx; ++i) {
      const Index row = i + (nx - 1) * j;
      t.emplace_back(row, i + nx * j, -1.0);
      t.emplace_back(row, i + 1 + nx * j, 1.0);
    }
  for (Index j = 0; j + 1 < ny; ++j)
    for (Index i = 0; i < nx; ++i) {
      const Index row = n_vert + i + nx * j;
      t.emplace_back(row, i + nx * j, -1.0);
      t.emplace_back(row, i + nx * (j + 1), 1.0);
    }
  SparseMatrix G(n_vert + n_horz, nx * ny);
  G.setFromTriplets(t.begin(), t.end());
  return LinearMap::from_sparse(std::move(G));
}

Matrix dct_matrix(Index N) {
  Matrix A(N, N);
  const double c0 = std::sqrt(1.0 / static_cast<double>(N));
  const double ck = std::sqrt(2.0 / static_cast<double>(N));
  for (Index k = 0; k < N; ++k)
    for (Index n = 0; n < N; ++n)
      A(k, n) = (k == 0 ? c0 : ck) *
                std::cos(std::numbers::pi * (static_cast<double>(n) + 0.5) * static_cast<double>(k) /
                         static_cast<double>(N));
  return A;
}

LinearMap subsampled_dct_operator(Index N, std::span<const Index> omega) {
  check_index_set(omega, N, "omega");
  const Matrix A = dct_matrix(N);
  Matrix rows(static_cast<Index>(omega.size()), N);
  for (std::size_t i = 0; i < omega.size(); ++i) rows.row(static_cast<Index>(i)) = A.row(omega[i]);
  return LinearMap(std::make_shared<SelectedRowsImpl>(std::move(rows)));
}

Index mask_center_index(Index n) { return n / 2 + n * (n / 2); }

std::vector<Index> radial_sampling_mask(Index n, Index n_lines, double angle_offset) {
  if (n < 4 || n_lines < 1)
    throw Error(ErrorCode::InvalidArgument, "radial mask needs n >= 4 and at least one line");
  const Index c = n / 2;
  const Index lo = -c;
  const Index hi = n - 1 - c;
  std::vector<char> hit(static_cast<std::size_t>(n * n), 0);
  auto mark = [&](Index du, Index dv) {
    // du: column offset, dv: row offset from the centre.
    if (du < lo || du > hi || dv < lo || dv > hi) return;
    hit[static_cast<std::size_t>((dv + c) + n * (du + c))] = 1;
  };
  // The two grid cells bracketing the line in its minor axis, or one when the
  // line passes through a cell centre.
  auto bracket = [](double v, auto&& f) {
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-9) {
      f(static_cast<Index>(r));
    } else {
      f(static_cast<Index>(std::floor(v)));
      f(static_cast<Index>(std::ceil(v)));
    }
  };
  for (Index i = 0; i < n_lines; ++i) {
    const double phi = angle_offset + static_cast<double>(i) * std::numbers::pi / static_cast<double>(n_lines);
    const double cs = std::cos(phi);
    const double sn = std::sin(phi);
    for (Index a = lo; a <= hi; ++a) {
      if (std::abs(cs) >= std::abs(sn)) {
        bracket(static_cast<double>(a) * sn / cs, [&](Index dv) { mark(a, dv); });
      } else {
        bracket(static_cast<double>(a) * cs / sn, [&](Index du) { mark(du, a); });
      }
    }
  }
  hit[static_cast<std::size_t>(mask_center_index(n))] = 1;
  std::vector<Index> mask;
  for (Index k = 0; k < n * n; ++k)
    if (hit[static_cast<std::size_t>(k)]) mask.push_back(k);
  return mask;
}

ComplexLinearMap subsampled_dft_operator(std::span<const Index> mask, Index n) {
  check_index_set(mask, n * n, "mask");
  return ComplexLinearMap(std::make_shared<SubsampledDftImpl>(mask, n));
}

RealSystem realify(const ComplexLinearMap& map, const ComplexVector& y) {
  if (y.size() != map.rows())
    throw Error(ErrorCode::DimensionMismatch, "measurement length " + std::to_string(y.size()) +
                                                  " does not match operator rows " +
                                                  std::to_string(map.rows()));
  Vector stacked(2 * y.size());
  stacked.head(y.size()) = y.real();
  stacked.tail(y.size()) = y.imag();
  return {LinearMap(std::make_shared<RealifiedImpl>(map)), std::move(stacked)};
}

LinearMap row_scaled(const LinearMap& map, Vector scale) {
  if (scale.size() != map.rows())
    throw Error(ErrorCode::DimensionMismatch, "row scaling length mismatch");
  if (const Matrix* d = map.dense(); d && map.representation() == Representation::Dense)
    return LinearMap::from_dense(scale.asDiagonal() * (*d));
  if (const SparseMatrix* s = map.sparse())
    return LinearMap::from_sparse(SparseMatrix(scale.asDiagonal() * (*s)));
  return LinearMap(std::make_shared<RowScaledImpl>(map, std::move(scale)));
}

RealSystem whiten(const LinearMap& map, const Vector& y, const Matrix& cov) {
  const Index M = map.rows();
  if (cov.rows() != M || cov.cols() != M || y.size() != M)
    throw Error(ErrorCode::DimensionMismatch,
                "noise covariance is " + std::to_string(cov.rows()) + "x" + std::to_string(cov.cols()) +
                    " but operator has " + std::to_string(M) + " rows");
  if (!cov.isApprox(cov.transpose(), 1e-12))
    throw Error(ErrorCode::NotPositiveDefinite, "noise covariance is not symmetric");
  const bool diagonal = (cov - Matrix(cov.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (diagonal) {
    const Vector d = cov.diagonal();
    if (!(d.array() > 0.0).all())
      throw Error(ErrorCode::NotPositiveDefinite, "noise covariance has a non-positive variance");
    if ((d.array() == 1.0).all()) return {map, y};
    const Vector scale = d.cwiseSqrt().cwiseInverse();
    return {row_scaled(map, scale), scale.cwiseProduct(y)};
  }
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorisation of noise covariance failed");
  const auto C = llt.matrixL();
  return {LinearMap::from_dense(C.solve(map.to_dense())), C.solve(y)};
}

MMVProblem whiten_problem(const MMVProblem& problem) {
  MMVProblem out = problem;
  out.noise_cov.clear();
  for (std::size_t l = 0; l < problem.noise_cov.size(); ++l) {
    if (!problem.noise_cov[l]) continue;
    auto sys = whiten(problem.forward_ops[l], problem.measurements[l], *problem.noise_cov[l]);
    out.forward_ops[l] = std::move(sys.map);
    out.measurements[l] = std::move(sys.data);
  }
  return out;
}

}  // namespace jsbl
