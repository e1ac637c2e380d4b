#pragma once

#include <memory>

#include <Eigen/Dense>

#include "fpsi/forms.hpp"

namespace fpsi {

/// Sparse LU factors (partial pivoting) of a square matrix, reusable across solves.
class Factorization {
 public:
  Factorization();
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  [[nodiscard]] int size() const;
  [[nodiscard]] double min_pivot() const { return min_pivot_; }
  [[nodiscard]] double max_pivot() const { return max_pivot_; }
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  friend Factorization factorize(const SparseMatrix& matrix);
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double min_pivot_ = 0.0;
  double max_pivot_ = 0.0;
};

/// Throws Singular when a pivot falls below 1e-14 times the largest row norm.
Factorization factorize(const SparseMatrix& matrix);
Eigen::VectorXd solve(const Factorization& fact, const Eigen::VectorXd& rhs);

enum class Extreme { Smallest, Largest };

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Extreme eigenpair of A x = θ B x for symmetric A and SPD B (dense).
EigenPair gen_eig_extreme(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, Extreme which);

}  // namespace fpsi
