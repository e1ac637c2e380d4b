#pragma once

#include <vector>

#include "fpsi/state.hpp"
#include "fpsi/system.hpp"

namespace fpsi {

/// Matrices realizing the norms that enter the energy.
struct EnergyNorms {
  SparseMatrix mass_u, strain_u;
  SparseMatrix mass_x, strain_x, div_x;
  SparseMatrix mass_p, grad_p;
  SparseMatrix mass_g2;
  SparseMatrix h_half;
  SparseMatrix mass_pf;
  SparseMatrix dual_g1;  // discrete H^{-1/2} Gram on the normal-stress multiplier
};

EnergyNorms build_energy_norms(const DiscreteSpaces& spaces);

/// ‖η‖²_E = 2ν_p‖D(η)‖² + λ‖div η‖².
double elastic_energy(const EnergyNorms& norms, const Eigen::VectorXd& eta, const PhysicalParams& params);

EnergyReport energy(const EnergyNorms& norms, const State& state, const PhysicalParams& params, double dt);
EnergyReport energy(const DiscreteSpaces& spaces, const State& state, const PhysicalParams& params, double dt);

/// Residual of the discrete per-step energy balance between consecutive states.
double check_energy_identity(const EnergyNorms& norms, const DiscreteSpaces& spaces, const State& prev,
                             const State& next, const LoadData& loads, const PhysicalParams& params, double dt);

double alpha1_formula(const PhysicalParams& params, double dt);

/// Smallest eigenvalue of sym(A_M) against the M Gram on free dofs.
double estimate_coercivity(const BlockSystem& system, bool full_gradient_gram = false);
double estimate_coercivity(const Eigen::MatrixXd& A, const Eigen::MatrixXd& G);

struct InfSupEstimate {
  double beta2 = 0.0;          // sqrt of the smallest nonzero eigenvalue
  double smallest = 0.0;       // smallest eigenvalue (zero when B_MZ has a kernel on Z)
  int kernel_dimension = 0;
};

InfSupEstimate estimate_inf_sup(const BlockSystem& system);
InfSupEstimate estimate_inf_sup(const Eigen::MatrixXd& B, const Eigen::MatrixXd& G_M, const Eigen::MatrixXd& G_Z);

/// Trace, Korn and Poincaré constants of the domains.
struct DomainConstants {
  double C_T = 2.0;
  double C_K = 2.0;
  double C_P = 1.0;
};

struct StabilityConstants {
  double alpha1 = 0.0;
  double C_KP = 0.0;
  double C_eta = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double C_bar = 0.0;
  double C_star = 0.0;
};

StabilityConstants stability_constants(const PhysicalParams& params, double dt, int N,
                                       const DomainConstants& domain = {}, double beta2 = 1.0);

/// sqrt(sᵀ R S⁻¹ Rᵀ s) for normal-stress multiplier coefficients s.
double dual_norm_minus_half(const Eigen::VectorXd& s, const BlockSystem& system);

/// Both sides of the unforced stability estimate over a trajectory.
struct TheoremBound {
  double lhs = 0.0;
  double rhs = 0.0;
  [[nodiscard]] bool holds() const { return lhs <= rhs; }
};

TheoremBound theorem_bound(const BlockSystem& system, const std::vector<State>& trajectory,
                           const StabilityConstants& constants);

}  // namespace fpsi
