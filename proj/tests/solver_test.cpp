#include <gtest/gtest.h>

#include <random>

#include "fpsi/solver.hpp"
#include "oracles.hpp"

namespace {

fpsi::SparseMatrix sparse(const Eigen::MatrixXd& d) { return d.sparseView(); }

TEST(Solver, Identity) {
  const auto f = fpsi::factorize(sparse(Eigen::MatrixXd::Identity(5, 5)));
  Eigen::VectorXd b(5);
  b << 1, -2, 3, 0.5, 7;
  EXPECT_EQ(fpsi::solve(f, b), b);
}

TEST(Solver, NeedsPivoting) {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  const auto f = fpsi::factorize(sparse(a));
  const Eigen::VectorXd x = f.solve(Eigen::Vector2d(3.0, -4.0));
  EXPECT_DOUBLE_EQ(x[0], -4.0);
  EXPECT_DOUBLE_EQ(x[1], 3.0);
}

TEST(Solver, Singular) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  try {
    fpsi::factorize(sparse(a));
    FAIL();
  } catch (const fpsi::Error& e) {
    EXPECT_EQ(e.kind(), fpsi::ErrorKind::Singular);
  }
}

TEST(Solver, Diagonal) {
  Eigen::MatrixXd a = Eigen::Vector2d(2.0, 4.0).asDiagonal();
  const Eigen::VectorXd x = fpsi::factorize(sparse(a)).solve(Eigen::Vector2d(2.0, 4.0));
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
}

TEST(Solver, RandomSpdAgainstOracle) {
  std::mt19937 rng(42);
  std::normal_distribution<double> N;
  Eigen::MatrixXd r(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) r(i, j) = N(rng);
  }
  const Eigen::MatrixXd a = r * r.transpose() + Eigen::MatrixXd::Identity(10, 10);
  Eigen::VectorXd b(10);
  for (int i = 0; i < 10; ++i) b[i] = N(rng);
  const auto f = fpsi::factorize(sparse(a));
  const Eigen::VectorXd x = f.solve(b);
  const Eigen::VectorXd ref = oracle::gauss_solve(a, b);
  EXPECT_LT((x - ref).norm() / ref.norm(), 1e-12);

  // Reusing the factorization matches refactorizing.
  Eigen::VectorXd b2 = 2.0 * b + Eigen::VectorXd::Ones(10);
  EXPECT_EQ(f.solve(b2), fpsi::factorize(sparse(a)).solve(b2));
  EXPECT_EQ(f.solve(b), x);
}

TEST(GenEig, Examples) {
  const Eigen::MatrixXd A = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_NEAR(fpsi::gen_eig_extreme(A, I, fpsi::Extreme::Smallest).value, 1.0, 1e-14);
  EXPECT_NEAR(fpsi::gen_eig_extreme(A, I, fpsi::Extreme::Largest).value, 3.0, 1e-14);
  EXPECT_NEAR(fpsi::gen_eig_extreme(A, A, fpsi::Extreme::Smallest).value, 1.0, 1e-14);
  EXPECT_NEAR(fpsi::gen_eig_extreme(A, A, fpsi::Extreme::Largest).value, 1.0, 1e-14);
  Eigen::MatrixXd bad = I;
  bad(1, 1) = -1.0;
  try {
    fpsi::gen_eig_extreme(A, bad, fpsi::Extreme::Smallest);
    FAIL();
  } catch (const fpsi::Error& e) {
    EXPECT_EQ(e.kind(), fpsi::ErrorKind::NotSPD);
  }
}

TEST(GenEig, RandomAgainstJacobi) {
  std::mt19937 rng(3);
  std::normal_distribution<double> N;
  Eigen::MatrixXd a(8, 8), r(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      a(i, j) = N(rng);
      r(i, j) = N(rng);
    }
  }
  a = 0.5 * (a + a.transpose()).eval();
  const Eigen::MatrixXd b = r * r.transpose() + 0.5 * Eigen::MatrixXd::Identity(8, 8);
  // Reduce to a standard problem with the Cholesky factor for the oracle.
  const Eigen::MatrixXd L = b.llt().matrixL();
  const Eigen::MatrixXd Linv = L.inverse();
  const auto ev = oracle::jacobi_eigenvalues(Linv * a * Linv.transpose());
  const auto lo = fpsi::gen_eig_extreme(a, b, fpsi::Extreme::Smallest);
  const auto hi = fpsi::gen_eig_extreme(a, b, fpsi::Extreme::Largest);
  EXPECT_NEAR(lo.value, ev.front(), 1e-10 * std::abs(ev.back()));
  EXPECT_NEAR(hi.value, ev.back(), 1e-10 * std::abs(ev.back()));
  EXPECT_LT((a * lo.vector - lo.value * b * lo.vector).norm(), 1e-8 * a.norm() * lo.vector.norm());
}

}  // namespace
