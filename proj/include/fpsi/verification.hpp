#pragma once

#include <string>
#include <vector>

#include "fpsi/timestepper.hpp"

namespace fpsi {

/// Closed-form solution together with the data that makes it exact.
/// Interface quantities are the fluid normal and tangential stresses and the
/// poroelastic normal flux, all evaluated on the interface.
struct ManufacturedCase {
  std::string id;
  PhysicalParams params;
  VectorTimeFn u;
  ScalarTimeFn p_f;
  VectorTimeFn eta;
  VectorTimeFn eta_t;
  ScalarTimeFn p_p;
  std::function<Mat2(Vec2, double)> grad_u;
  std::function<Mat2(Vec2, double)> grad_eta;
  std::function<Vec2(Vec2, double)> grad_p_p;
  ScalarTimeFn g1;
  ScalarTimeFn g2;
  ScalarTimeFn lambda;
  /// Initial data, forcings, boundary data and interface defects.
  ProblemData data;
};

/// Registered ids: "trig" (sin/cos in space, e^{-t} in time) and "poly"
/// (steady shear velocity u = (y^2, 0), everything else zero).
ManufacturedCase manufactured_case(const std::string& id, const PhysicalParams& params = {});
std::vector<std::string> manufactured_case_ids();

struct FieldErrors {
  double u_L2 = 0, u_H1 = 0, pf_L2 = 0, eta_L2 = 0, eta_H1 = 0, pp_L2 = 0, pp_H1 = 0;
  double g1_L2 = 0, g2_L2 = 0, lambda_L2 = 0;
};

/// Errors of a state against the exact fields at time t (H1 entries are seminorms).
FieldErrors field_errors(const DiscreteSpaces& spaces, const State& state, const ManufacturedCase& mc, double t);

struct ConvergenceRow {
  int level = 0;
  double h = 0;
  double dt = 0;
  FieldErrors err;
  FieldErrors rate;  // zero on the first row
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

struct StudyOptions {
  int base_cells = 4;     // cells per side on level 0, doubled per level
  double final_time = 0.0625;
  double dt_factor = 0.25;  // dt = dt_factor * h^2
  bool solve = true;        // false: interpolate the exact fields instead of solving
};

ConvergenceTable convergence_study(const ManufacturedCase& mc, int levels, const StudyOptions& options = {});

/// Dense Gaussian elimination with partial pivoting on the full system.
Eigen::VectorXd oracle_dense_solve(const BlockSystem& system, const Eigen::VectorXd& rhs);
Eigen::VectorXd oracle_dense_solve(Eigen::MatrixXd matrix, Eigen::VectorXd rhs);

}  // namespace fpsi
