#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fpsi/elements.hpp"
#include "fpsi/mesh.hpp"

namespace fpsi {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Model constants. All must be strictly positive; `eps_bar` may be zero only
/// when explicitly allowed.
struct PhysicalParams {
  double rho_f = 1.0;
  double nu_f = 1.0;
  double rho_p = 1.0;
  double nu_p = 1.0;
  double lambda = 1.0;
  double alpha = 1.0;
  double s0 = 1.0;
  double kappa = 1.0;
  double beta = 1.0;
  double eps_bar = 1e-4;

  void validate(bool allow_zero_eps_bar = false) const;
};

/// The seven discrete spaces on a geometry: vector P2 velocity, P1 fluid
/// pressure, vector P2 displacement, P1 pore pressure, P0 normal-stress and
/// tangential-stress multipliers, continuous P1 interface flux multiplier.
struct DiscreteSpaces {
  Geometry geometry;
  FunctionSpace velocity;
  FunctionSpace fluid_pressure;
  FunctionSpace displacement;
  FunctionSpace pore_pressure;
  FunctionSpace g1;
  FunctionSpace g2;
  FunctionSpace lambda;
};

DiscreteSpaces build_spaces(const Geometry& geometry);

// Elementary matrices (rows = test functions, columns = trial functions).
SparseMatrix mass_matrix(const FunctionSpace& space);
SparseMatrix stiffness_matrix(const FunctionSpace& space);  // (grad p, grad q), scalar spaces
SparseMatrix strain_matrix(const FunctionSpace& space);     // (D(u), D(v)), vector spaces
SparseMatrix div_div_matrix(const FunctionSpace& space);    // (div u, div v)
/// (div v, q) with rows on the scalar space and columns on the vector space.
SparseMatrix divergence_matrix(const FunctionSpace& vector_space, const FunctionSpace& scalar_space);

enum class VolumeForm { A1, A2, BPP, BPF };
enum class InterfaceForm { AG, BG1, BG2, BLM, B2 };

/// A1 acts on the stacked velocity/displacement space U x X.
/// A2: pore pressure. BPP: rows pore pressure, columns X. BPF: rows fluid pressure, columns U.
SparseMatrix assemble_volume_form(VolumeForm form, const DiscreteSpaces& spaces,
                                  const PhysicalParams& params, double dt);

/// AG: g2 x g2. BG1: rows g1, columns U x X. BG2: rows g2, columns U x X.
/// BLM: rows g1, columns lambda. B2: rows lambda, columns pore pressure.
SparseMatrix assemble_interface_form(InterfaceForm form, const DiscreteSpaces& spaces,
                                     const PhysicalParams& params, double dt);

/// Gram matrix of (u,v)_{0,γ} + ∬ (u(x)-u(y))(v(x)-v(y)) / |x-y|^2 on a continuous P1 interface space.
SparseMatrix assemble_h_half_gram(const FunctionSpace& lambda_space);

/// The double-integral part alone, evaluated directly from nodal values.
double h_half_seminorm_squared(const FunctionSpace& lambda_space, const Eigen::VectorXd& coeffs);

/// Right-hand side data at the new time level. Empty functions contribute nothing.
/// The interface corrections are only used by manufactured problems whose exact
/// fields do not satisfy the interface conditions.
struct LoadData {
  VectorFn fluid_force;
  VectorFn solid_force;
  ScalarFn pressure_source;
  VectorFn fluid_traction;   // on NeumannF edges
  VectorFn solid_traction;   // on NeumannS edges
  ScalarFn pressure_flux;    // on NeumannP edges
  VectorFn stress_jump;      // added to the displacement equation on γ
  ScalarFn mass_defect;      // added to F3
  ScalarFn slip_defect;      // added to F4
  ScalarFn pressure_defect;  // tested against the flux multiplier
  Eigen::VectorXd lambda_shift;  // extra vector for the flux-multiplier rows
};

/// Scaled history: velocity uⁿ, η̂ⁿ = ηⁿ/Δt, η̂ⁿ⁻¹, p̂ⁿ = Δt pⁿ.
struct LoadHistory {
  Eigen::VectorXd u;
  Eigen::VectorXd eta_hat;
  Eigen::VectorXd eta_hat_prev;
  Eigen::VectorXd p_hat;
};

enum class LoadId { F1, F2, F3, F4 };

Eigen::VectorXd assemble_load(LoadId load, const DiscreteSpaces& spaces, const LoadData& data,
                              const LoadHistory& history, const PhysicalParams& params, double dt);

/// Right-hand side of the flux-multiplier rows (zero unless a manufactured case adds one).
Eigen::VectorXd assemble_lambda_load(const DiscreteSpaces& spaces, const LoadData& data, double dt);

/// Boundary traces used by the interface forms: for segment s of the interface,
/// the volume-space nodes of the adjacent triangle and their basis values at x.
struct TraceEval {
  std::vector<int> nodes;
  std::vector<double> values;
};
TraceEval trace_basis(const FunctionSpace& space, const InterfaceMesh& gamma, bool fluid_side, int segment,
                      Vec2 x);

}  // namespace fpsi
