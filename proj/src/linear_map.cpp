#include "jsbl/linear_map.hpp"

#include <string>

#include "jsbl/errors.hpp"

namespace jsbl {

namespace {

class DenseImpl final : public LinearMap::Impl {
 public:
  explicit DenseImpl(Matrix m) : m_(std::move(m)) {}
  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }
  Representation representation() const override { return Representation::Dense; }
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

class SparseImpl final : public LinearMap::Impl {
 public:
  explicit SparseImpl(SparseMatrix m) : m_(std::move(m)) { m_.makeCompressed(); }
  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }
  Representation representation() const override { return Representation::Sparse; }
  void apply(const Vector& x, Vector& out) const override { out = m_ * x; }
  void adjoint_apply(const Vector& y, Vector& out) const override { out = m_.transpose() * y; }
  Matrix to_dense() const override { return Matrix(m_); }
  Vector normal_diagonal() const override {
    Vector d = Vector::Zero(m_.cols());
    for (Index j = 0; j < m_.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(m_, j); it; ++it) d(j) += it.value() * it.value();
    return d;
  }
  const SparseMatrix* sparse() const override { return &m_; }

 private:
  SparseMatrix m_;
};

class DenseComplexImpl final : public ComplexLinearMap::Impl {
 public:
  explicit DenseComplexImpl(ComplexMatrix m) : m_(std::move(m)) {}
  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }
  void apply(const ComplexVector& x, ComplexVector& out) const override { out.noalias() = m_ * x; }
  void adjoint_apply(const ComplexVector& y, ComplexVector& out) const override {
    out.noalias() = m_.adjoint() * y;
  }
  ComplexMatrix to_dense() const override { return m_; }

 private:
  ComplexMatrix m_;
};

[[noreturn]] void mismatch(const char* what, Index got, Index want) {
  throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": vector length " +
                                                std::to_string(got) + ", expected " +
                                                std::to_string(want));
}

}  // namespace

Matrix LinearMap::Impl::to_dense() const {
  Matrix out(rows(), cols());
  Vector e = Vector::Zero(cols());
  Vector col;
  for (Index j = 0; j < cols(); ++j) {
    e(j) = 1.0;
    apply(e, col);
    out.col(j) = col;
    e(j) = 0.0;
  }
  return out;
}

Vector LinearMap::Impl::normal_diagonal() const {
  return to_dense().colwise().squaredNorm().transpose();
}

LinearMap::LinearMap() : impl_(std::make_shared<DenseImpl>(Matrix(0, 0))) {}

LinearMap::LinearMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

LinearMap LinearMap::from_dense(Matrix m) { return LinearMap(std::make_shared<DenseImpl>(std::move(m))); }

LinearMap LinearMap::from_sparse(SparseMatrix m) {
  return LinearMap(std::make_shared<SparseImpl>(std::move(m)));
}

Vector LinearMap::apply(const Vector& x) const {
  if (x.size() != cols()) mismatch("apply", x.size(), cols());
  Vector out;
  impl_->apply(x, out);
  return out;
}

Vector LinearMap::adjoint_apply(const Vector& y) const {
  if (y.size() != rows()) mismatch("adjoint_apply", y.size(), rows());
  Vector out;
  impl_->adjoint_apply(y, out);
  return out;
}

ComplexMatrix ComplexLinearMap::Impl::to_dense() const {
  ComplexMatrix out(rows(), cols());
  ComplexVector e = ComplexVector::Zero(cols());
  ComplexVector col;
  for (Index j = 0; j < cols(); ++j) {
    e(j) = 1.0;
    apply(e, col);
    out.col(j) = col;
    e(j) = 0.0;
  }
  return out;
}

Vector ComplexLinearMap::Impl::column_sq_norms() const {
  return to_dense().cwiseAbs2().colwise().sum().transpose();
}

ComplexLinearMap::ComplexLinearMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ComplexLinearMap ComplexLinearMap::from_dense(ComplexMatrix m) {
  return ComplexLinearMap(std::make_shared<DenseComplexImpl>(std::move(m)));
}

ComplexVector ComplexLinearMap::apply(const ComplexVector& x) const {
  if (x.size() != cols()) mismatch("apply", x.size(), cols());
  ComplexVector out;
  impl_->apply(x, out);
  return out;
}

ComplexVector ComplexLinearMap::adjoint_apply(const ComplexVector& y) const {
  if (y.size() != rows()) mismatch("adjoint_apply", y.size(), rows());
  ComplexVector out;
  impl_->adjoint_apply(y, out);
  return out;
}

}  // namespace jsbl
