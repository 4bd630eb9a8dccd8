#pragma once

#include <complex>
#include <memory>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace jsbl {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Representation { Dense, Sparse, Transform };

/// Real linear operator with an exact adjoint. Value type: copies share the
/// same immutable implementation, so maps are cheap to pass around and safe to
/// use from several threads.
class LinearMap {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual Index rows() const = 0;
    virtual Index cols() const = 0;
    virtual Representation representation() const = 0;
    virtual void apply(const Vector& x, Vector& out) const = 0;
    virtual void adjoint_apply(const Vector& y, Vector& out) const = 0;
    virtual Matrix to_dense() const;
    /// Diagonal of A^T A.
    virtual Vector normal_diagonal() const;
    virtual const SparseMatrix* sparse() const { return nullptr; }
    virtual const Matrix* dense() const { return nullptr; }
  };

  LinearMap();
  explicit LinearMap(std::shared_ptr<const Impl> impl);

  static LinearMap from_dense(Matrix m);
  static LinearMap from_sparse(SparseMatrix m);

  Index rows() const { return impl_->rows(); }
  Index cols() const { return impl_->cols(); }
  Representation representation() const { return impl_->representation(); }

  Vector apply(const Vector& x) const;
  Vector adjoint_apply(const Vector& y) const;
  Matrix to_dense() const { return impl_->to_dense(); }
  Vector normal_diagonal() const { return impl_->normal_diagonal(); }

  /// Direct access to the stored matrix when the representation has one.
  const SparseMatrix* sparse() const { return impl_->sparse(); }
  const Matrix* dense() const { return impl_->dense(); }

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Complex operator acting on complex vectors; used for Fourier sampling.
class ComplexLinearMap {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual Index rows() const = 0;
    virtual Index cols() const = 0;
    virtual void apply(const ComplexVector& x, ComplexVector& out) const = 0;
    virtual void adjoint_apply(const ComplexVector& y, ComplexVector& out) const = 0;
    virtual ComplexMatrix to_dense() const;
    /// Squared 2-norms of the columns.
    virtual Vector column_sq_norms() const;
  };

  explicit ComplexLinearMap(std::shared_ptr<const Impl> impl);
  static ComplexLinearMap from_dense(ComplexMatrix m);

  Index rows() const { return impl_->rows(); }
  Index cols() const { return impl_->cols(); }
  ComplexVector apply(const ComplexVector& x) const;
  ComplexVector adjoint_apply(const ComplexVector& y) const;
  ComplexMatrix to_dense() const { return impl_->to_dense(); }
  Vector column_sq_norms() const { return impl_->column_sq_norms(); }

 private:
  std::shared_ptr<const Impl> impl_;
};

}  // namespace jsbl
