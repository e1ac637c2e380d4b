#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <vector>

#include "fpsi/forms.hpp"

namespace fpsi {

/// Unknown blocks in global order: the five M fields followed by the two Z fields.
enum class Field { Velocity = 0, Displacement, PorePressure, G2, Lambda, FluidPressure, G1 };

inline constexpr int kFieldCount = 7;

/// Monolithic saddle point system in scaled unknowns.
///
/// Unknown vector: [u, η̂, p̂_p, ĝ₂, λ_p | p̂_f, ĝ₁]. Dirichlet dofs are
/// eliminated symmetrically (zero row and column, unit diagonal).
struct BlockSystem {
  std::shared_ptr<const DiscreteSpaces> spaces;
  PhysicalParams params;
  double dt = 0.0;

  SparseMatrix A_M;
  SparseMatrix B_MZ;
  SparseMatrix G_M;
  SparseMatrix G_Z;
  /// Alternative Gram on M using the full gradient (‖∇v‖²) instead of ‖D(v)‖² on U and X.
  SparseMatrix G_M_full_gradient;
  /// H^{1/2} Gram of the flux-multiplier space (unscaled by ε̄).
  SparseMatrix S_lambda;

  std::array<int, kFieldCount + 1> offsets{};
  std::vector<char> fixed;  // per global dof

  [[nodiscard]] int dim_M() const { return offsets[5]; }
  [[nodiscard]] int dim_Z() const { return offsets[7] - offsets[5]; }
  [[nodiscard]] int dim() const { return offsets[7]; }
  [[nodiscard]] int offset(Field f) const { return offsets[static_cast<int>(f)]; }
  [[nodiscard]] int size(Field f) const { return offsets[static_cast<int>(f) + 1] - offsets[static_cast<int>(f)]; }
  [[nodiscard]] std::vector<int> free_M() const;
  [[nodiscard]] std::vector<int> free_Z() const;
};

BlockSystem build_block_system(std::shared_ptr<const DiscreteSpaces> spaces, const PhysicalParams& params,
                               double dt, bool allow_zero_eps_bar = false);

/// [[A_M, B_MZᵀ], [B_MZ, 0]].
SparseMatrix full_matrix(const BlockSystem& system);

/// Right-hand side [F1, F2, F4, λ-load | 0, −F3] with Dirichlet entries zeroed.
Eigen::VectorXd assemble_rhs(const BlockSystem& system, const LoadData& data, const LoadHistory& history);

/// Block residual norms of K x − rhs: momentum-f, mass-f, momentum-s,
/// pressure-p, LM-g2, LM-λ, interface constraint.
std::array<double, 7> residual(const BlockSystem& system, const Eigen::VectorXd& state, const Eigen::VectorXd& rhs);

inline constexpr std::array<const char*, 7> kResidualNames = {
    "momentum_f", "mass_f", "momentum_s", "pressure_p", "lm_g2", "lm_lambda", "constraint"};

/// Rows/columns of `m` restricted to the listed indices (dense).
Eigen::MatrixXd submatrix(const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols);

void write_matrix_market(std::ostream& out, const SparseMatrix& m);

}  // namespace fpsi
