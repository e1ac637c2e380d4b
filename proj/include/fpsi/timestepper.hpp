#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fpsi/solver.hpp"
#include "fpsi/state.hpp"
#include "fpsi/system.hpp"

namespace fpsi {

using ScalarTimeFn = std::function<double(Vec2, double)>;
using VectorTimeFn = std::function<Vec2(Vec2, double)>;

struct InitialData {
  VectorFn u;
  VectorFn eta;
  VectorFn eta_dot;
  ScalarFn p_p;
};

/// Time-dependent data of a problem; empty members contribute nothing.
struct ProblemData {
  InitialData initial;
  VectorTimeFn fluid_force;
  VectorTimeFn solid_force;
  ScalarTimeFn pressure_source;
  VectorTimeFn fluid_traction;
  VectorTimeFn solid_traction;
  ScalarTimeFn pressure_flux;
  VectorTimeFn stress_jump;
  ScalarTimeFn mass_defect;
  ScalarTimeFn slip_defect;
  ScalarTimeFn pressure_defect;
  std::function<Eigen::VectorXd(const BlockSystem&, double)> lambda_shift;
};

/// Data frozen at time t.
LoadData loads_at(const ProblemData& data, const BlockSystem& system, double t);

/// State at n = 0; ηⁿ⁻¹ = η⁰ − Δt η̇⁰, pressure and multipliers start at zero.
State init_state(const DiscreteSpaces& spaces, const InitialData& initial, double dt);

/// Scaled history vectors for the loads.
LoadHistory history_of(const State& state, double dt);

/// Assembled system together with its (time-independent) factorization.
struct Stepper {
  BlockSystem system;
  Factorization factorization;
};

Stepper make_stepper(std::shared_ptr<const DiscreteSpaces> spaces, const PhysicalParams& params, double dt,
                     bool allow_zero_eps_bar = false);

/// One backward Euler step to t + Δt with loads evaluated at the new time.
State step(const Stepper& stepper, const State& state, const LoadData& loads);

struct RunConfig {
  PhysicalParams params;
  double dt = 0.01;
  int n_steps = 1;
  Rect fluid{0.0, 0.0, 1.0, 1.0};
  Rect poro{0.0, 1.0, 1.0, 2.0};
  int nx = 4;
  int ny = 4;
  bool allow_zero_eps_bar = false;
};

struct RunResult {
  std::shared_ptr<const DiscreteSpaces> spaces;
  std::vector<State> trajectory;  // levels 0..n_steps
  std::vector<EnergyReport> energy;
};

/// Initial state with independent uniform(-1, 1) nodal values for u, η, η̇ and p_p
/// (zero on constrained dofs); pressure and multipliers start at zero.
State random_initial_state(const DiscreteSpaces& spaces, double dt, unsigned seed);

std::shared_ptr<const DiscreteSpaces> spaces_for(const RunConfig& config);

/// Full time loop; `observer` (optional) sees each new state and its energy row.
RunResult run(const RunConfig& config, const ProblemData& data,
              const std::function<void(const State&, const EnergyReport&)>& observer = {});

/// Same loop started from a given level-0 state on given spaces.
RunResult run(const RunConfig& config, std::shared_ptr<const DiscreteSpaces> spaces, const ProblemData& data,
              State initial, const std::function<void(const State&, const EnergyReport&)>& observer = {});

}  // namespace fpsi
