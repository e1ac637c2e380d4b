#include "fpsi/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>

namespace fpsi {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

class PivotLU : public Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> {
 public:
  // Diagonal of U, stored in the supernodal L structure.
  void pivot_range(double& lo, double& hi) const {
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (Eigen::Index j = 0; j < cols(); ++j) {
      double piv = 0.0;
      for (SCMatrix::InnerIterator it(m_Lstore, j); it; ++it) {
        if (it.index() == j) {
          piv = std::abs(it.value());
          break;
        }
      }
      lo = std::min(lo, piv);
      hi = std::max(hi, piv);
    }
  }
};

}  // namespace

struct Factorization::Impl {
  PivotLU lu;
};

Factorization::Factorization() = default;
Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

int Factorization::size() const { return impl_ ? static_cast<int>(impl_->lu.cols()) : 0; }

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& rhs) const {
  if (!impl_) throw Error(ErrorKind::Singular, "no factorization available");
  if (rhs.size() != size()) throw Error(ErrorKind::DimensionMismatch, "right-hand side has the wrong size");
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  return x;
}

Factorization factorize(const SparseMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
  double row_max = 0.0;
  for (int r = 0; r < matrix.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(matrix, r); it; ++it) s += std::abs(it.value());
    row_max = std::max(row_max, s);
  }
  Factorization f;
  f.impl_ = std::make_unique<Factorization::Impl>();
  ColMatrix a = matrix;
  a.makeCompressed();
  f.impl_->lu.compute(a);
  if (f.impl_->lu.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular, "sparse LU failed: " + f.impl_->lu.lastErrorMessage());
  }
  f.impl_->lu.pivot_range(f.min_pivot_, f.max_pivot_);
  if (!(f.min_pivot_ >= 1e-14 * row_max)) {
    throw Error(ErrorKind::Singular, "zero pivot encountered (" + std::to_string(f.min_pivot_) + ")");
  }
  return f;
}

Eigen::VectorXd solve(const Factorization& fact, const Eigen::VectorXd& rhs) { return fact.solve(rhs); }

EigenPair gen_eig_extreme(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, Extreme which) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "eigenproblem matrices must be square and of equal size");
  }
  if (A.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "empty eigenproblem");
  const Eigen::MatrixXd As = 0.5 * (A + A.transpose());
  const Eigen::MatrixXd Bs = 0.5 * (B + B.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(Bs);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotSPD, "right-hand matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(As, Bs, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NotSPD, "generalized eigensolver failed");
  const Eigen::Index k = which == Extreme::Smallest ? 0 : As.rows() - 1;
  return {es.eigenvalues()[k], es.eigenvectors().col(k)};
}

}  // namespace fpsi
