#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fpsi/analysis.hpp"
#include "fpsi/verification.hpp"

namespace fpsi {

/// Flat run description. Required keys: fluid_rect, poro_rect (four numbers
/// x0 y0 x1 y1 each), nx, ny, dt, n_steps. Everything else is optional.
struct Config {
  Rect fluid;
  Rect poro;
  int nx = 0;
  int ny = 0;
  PhysicalParams params;
  double dt = 0.0;
  int n_steps = 0;
  std::string case_id = "none";   // manufactured case, or "none"
  std::string initial = "smooth";  // zero | smooth | random (ignored with a case)
  unsigned seed = 1;
  std::string output_dir = "out";
  bool emit_vtk = false;
  bool emit_matrices = false;
  bool eps_bar_zero_override = false;
  DomainConstants domain;
  double beta2 = 1.0;
  int levels = 3;
  std::vector<std::string> warnings;

  [[nodiscard]] RunConfig run_config() const;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Problem data for a config without a manufactured case: no forcing and the
/// named initial condition ("random" is handled by the caller).
ProblemData unforced_problem(const std::string& initial);

struct VtkField {
  std::string name;
  int components = 1;         // 1 (SCALARS) or 2 (VECTORS, written with z = 0)
  std::vector<double> values;  // point-major
};

void write_vtk(std::ostream& out, const std::vector<Vec2>& points, const std::vector<std::array<int, 3>>& triangles,
               const std::vector<VtkField>& fields, const std::string& title = "fpsi");
void write_vtk(const std::string& path, const std::vector<Vec2>& points,
               const std::vector<std::array<int, 3>>& triangles, const std::vector<VtkField>& fields);

/// Writes `<prefix>_fluid.vtk` and `<prefix>_poro.vtk` with the vertex values of a state.
void write_state_vtk(const std::string& prefix, const DiscreteSpaces& spaces, const State& state);

void write_energy_csv(std::ostream& out, const std::vector<EnergyReport>& rows);
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);

}  // namespace fpsi
