#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fpsi/io.hpp"

namespace py = pybind11;

namespace {

std::shared_ptr<const fpsi::DiscreteSpaces> standard_spaces(int n) {
  return std::make_shared<const fpsi::DiscreteSpaces>(fpsi::build_spaces(fpsi::standard_geometry(n)));
}

py::dict energy_table(const std::vector<fpsi::EnergyReport>& rows) {
  std::vector<double> t, E, res;
  std::vector<int> n;
  for (const auto& r : rows) {
    n.push_back(r.n);
    t.push_back(r.t);
    E.push_back(r.E);
    res.push_back(r.identity_residual);
  }
  py::dict d;
  d["n"] = n;
  d["t"] = t;
  d["E"] = E;
  d["identity_residual"] = res;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fpsi, m) {
  m.doc() = "Monolithic Stokes-Biot finite element solver with interface Lagrange multipliers.";

  py::register_exception<fpsi::Error>(m, "FpsiError", PyExc_ValueError);

  py::class_<fpsi::PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("rho_f", &fpsi::PhysicalParams::rho_f)
      .def_readwrite("nu_f", &fpsi::PhysicalParams::nu_f)
      .def_readwrite("rho_p", &fpsi::PhysicalParams::rho_p)
      .def_readwrite("nu_p", &fpsi::PhysicalParams::nu_p)
      .def_readwrite("lam", &fpsi::PhysicalParams::lambda)
      .def_readwrite("alpha", &fpsi::PhysicalParams::alpha)
      .def_readwrite("s0", &fpsi::PhysicalParams::s0)
      .def_readwrite("kappa", &fpsi::PhysicalParams::kappa)
      .def_readwrite("beta", &fpsi::PhysicalParams::beta)
      .def_readwrite("eps_bar", &fpsi::PhysicalParams::eps_bar);

  py::class_<fpsi::BlockSystem>(m, "BlockSystem")
      .def_readonly("A_M", &fpsi::BlockSystem::A_M)
      .def_readonly("B_MZ", &fpsi::BlockSystem::B_MZ)
      .def_readonly("G_M", &fpsi::BlockSystem::G_M)
      .def_readonly("G_Z", &fpsi::BlockSystem::G_Z)
      .def_property_readonly("dim_M", &fpsi::BlockSystem::dim_M)
      .def_property_readonly("dim_Z", &fpsi::BlockSystem::dim_Z)
      .def("full_matrix", [](const fpsi::BlockSystem& s) { return fpsi::SparseMatrix(fpsi::full_matrix(s)); });

  m.def(
      "build_block_system",
      [](int n, const fpsi::PhysicalParams& p, double dt) { return fpsi::build_block_system(standard_spaces(n), p, dt); },
      py::arg("n"), py::arg("params"), py::arg("dt"),
      "Assemble the block system on two stacked unit squares with n x n cells each.");

  m.def("alpha1_formula", &fpsi::alpha1_formula, py::arg("params"), py::arg("dt"));
  m.def(
      "estimate_coercivity", [](const fpsi::BlockSystem& s) { return fpsi::estimate_coercivity(s); }, py::arg("system"));
  m.def(
      "estimate_inf_sup", [](const fpsi::BlockSystem& s) { return fpsi::estimate_inf_sup(s).beta2; }, py::arg("system"));

  py::class_<fpsi::StabilityConstants>(m, "StabilityConstants")
      .def_readonly("alpha1", &fpsi::StabilityConstants::alpha1)
      .def_readonly("C_KP", &fpsi::StabilityConstants::C_KP)
      .def_readonly("C_eta", &fpsi::StabilityConstants::C_eta)
      .def_readonly("C1", &fpsi::StabilityConstants::C1)
      .def_readonly("C2", &fpsi::StabilityConstants::C2)
      .def_readonly("K1", &fpsi::StabilityConstants::K1)
      .def_readonly("K2", &fpsi::StabilityConstants::K2)
      .def_readonly("K3", &fpsi::StabilityConstants::K3)
      .def_readonly("eps1", &fpsi::StabilityConstants::eps1)
      .def_readonly("eps2", &fpsi::StabilityConstants::eps2)
      .def_readonly("C_bar", &fpsi::StabilityConstants::C_bar)
      .def_readonly("C_star", &fpsi::StabilityConstants::C_star);
  m.def(
      "stability_constants",
      [](const fpsi::PhysicalParams& p, double dt, int N, double beta2) {
        return fpsi::stability_constants(p, dt, N, {}, beta2);
      },
      py::arg("params"), py::arg("dt"), py::arg("N"), py::arg("beta2") = 1.0);

  m.def(
      "energy_check",
      [](int n, const fpsi::PhysicalParams& p, double dt, int steps, unsigned seed) {
        fpsi::RunConfig cfg;
        cfg.params = p;
        cfg.nx = cfg.ny = n;
        cfg.dt = dt;
        cfg.n_steps = steps;
        const auto sp = fpsi::spaces_for(cfg);
        const auto res = fpsi::run(cfg, sp, fpsi::ProblemData{}, fpsi::random_initial_state(*sp, dt, seed));
        return energy_table(res.energy);
      },
      py::arg("n"), py::arg("params"), py::arg("dt"), py::arg("steps"), py::arg("seed") = 1,
      "Unforced run from random initial data; returns the energy history.");

  m.def(
      "convergence_study",
      [](const std::string& id, int levels, int base_cells, double final_time, bool solve) {
        fpsi::StudyOptions opt;
        opt.base_cells = base_cells;
        opt.final_time = final_time;
        opt.solve = solve;
        const auto table = fpsi::convergence_study(fpsi::manufactured_case(id), levels, opt);
        std::vector<py::dict> rows;
        for (const auto& r : table.rows) {
          py::dict d;
          d["h"] = r.h;
          d["dt"] = r.dt;
          d["err_u_L2"] = r.err.u_L2;
          d["err_eta_L2"] = r.err.eta_L2;
          d["err_pp_L2"] = r.err.pp_L2;
          d["err_pf_L2"] = r.err.pf_L2;
          d["rate_u_L2"] = r.rate.u_L2;
          d["rate_eta_L2"] = r.rate.eta_L2;
          d["rate_pp_L2"] = r.rate.pp_L2;
          rows.push_back(d);
        }
        return rows;
      },
      py::arg("case") = "trig", py::arg("levels") = 3, py::arg("base_cells") = 4, py::arg("final_time") = 0.0625,
      py::arg("solve") = true);

  m.def(
      "h_half_seminorm_squared",
      [](int n, const std::function<double(double)>& f) {
        const auto sp = fpsi::build_spaces(fpsi::standard_geometry(n));
        const auto v = fpsi::interpolate(sp.lambda, fpsi::ScalarFn([&](fpsi::Vec2 x) { return f(x.x); }));
        return fpsi::h_half_seminorm_squared(sp.lambda, v);
      },
      py::arg("n"), py::arg("f"), "Seminorm of the nodal interpolant of f(x) on the interface y = 1.");

  m.def(
      "parse_config",
      [](const std::string& text) {
        const auto c = fpsi::parse_config(text);
        py::dict d;
        d["nx"] = c.nx;
        d["ny"] = c.ny;
        d["dt"] = c.dt;
        d["n_steps"] = c.n_steps;
        d["params"] = c.params;
        d["warnings"] = c.warnings;
        return d;
      },
      py::arg("text"));
}
