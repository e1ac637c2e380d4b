#pragma once

#include <Eigen/Dense>

namespace fpsi {

/// Unscaled fields at time level n plus the history the loads and the energy
/// monitor need. `*_prev` hold the values of level n-1 (level 0 repeats the
/// initial data).
struct State {
  int n = 0;
  double t = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd p_f;
  Eigen::VectorXd eta;
  Eigen::VectorXd p_p;
  Eigen::VectorXd g1;
  Eigen::VectorXd g2;
  Eigen::VectorXd lambda;
  Eigen::VectorXd eta_dot;  // (ηⁿ − ηⁿ⁻¹)/Δt
  Eigen::VectorXd eta_prev;
  Eigen::VectorXd u_prev;
  Eigen::VectorXd p_prev;
  Eigen::VectorXd eta_dot_prev;
  /// Scaled solution and right-hand side of the solve that produced this state (empty at n = 0).
  Eigen::VectorXd scaled;
  Eigen::VectorXd rhs;
};

/// Energy and dissipation at one step.
struct EnergyReport {
  int n = 0;
  double t = 0.0;
  double E = 0.0;
  double diss_eta_dd = 0.0;  // ρ_p Δt ‖η̈‖²
  double diss_u_d = 0.0;     // ρ_f Δt ‖u̇‖²
  double diss_pp_d = 0.0;    // s₀ Δt ‖ṗ_p‖²
  double diss_eta_E = 0.0;   // Δt ‖η̇‖²_E
  double diss_Du = 0.0;      // 2ν_f ‖D(u)‖²
  double diss_gradpp = 0.0;  // κ ‖∇p_p‖²
  double diss_g2 = 0.0;      // (2/β) ‖g₂‖²
  double diss_lambda = 0.0;  // 2 (ε̄/Δt) ‖λ_p‖²_{1/2}
  double identity_residual = 0.0;
};

}  // namespace fpsi
