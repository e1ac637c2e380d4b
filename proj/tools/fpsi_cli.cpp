#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fpsi/io.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kValidation = 2;

bool is_validation(fpsi::ErrorKind k) {
  using fpsi::ErrorKind;
  switch (k) {
    case ErrorKind::MissingKey:
    case ErrorKind::BadValue:
    case ErrorKind::IoError:
    case ErrorKind::NonPositiveParam:
    case ErrorKind::UnknownCase:
    case ErrorKind::ZeroCells:
    case ErrorKind::InvalidRect:
    case ErrorKind::NonMatching:
      return true;
    default:
      return false;
  }
}

fpsi::Config load(const std::string& path) {
  auto cfg = fpsi::load_config(path);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
  return cfg;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fpsi::Error(fpsi::ErrorKind::IoError, "cannot write '" + path.string() + "'");
  return out;
}

fpsi::Config level_config(const fpsi::Config& cfg, int level) {
  fpsi::Config c = cfg;
  c.nx = cfg.nx << level;
  c.ny = cfg.ny << level;
  return c;
}

int cmd_run(const std::string& path) {
  const auto cfg = load(path);
  fs::create_directories(cfg.output_dir);
  const auto rc = cfg.run_config();
  const auto spaces = fpsi::spaces_for(rc);
  fpsi::ProblemData data;
  fpsi::State initial;
  if (cfg.case_id != "none") {
    data = fpsi::manufactured_case(cfg.case_id, cfg.params).data;
    initial = fpsi::init_state(*spaces, data.initial, rc.dt);
  } else {
    data = fpsi::unforced_problem(cfg.initial);
    initial = cfg.initial == "random" ? fpsi::random_initial_state(*spaces, rc.dt, cfg.seed)
                                      : fpsi::init_state(*spaces, data.initial, rc.dt);
  }
  const fs::path dir(cfg.output_dir);
  const auto observer = [&](const fpsi::State& st, const fpsi::EnergyReport&) {
    if (!cfg.emit_vtk) return;
    char name[32];
    std::snprintf(name, sizeof name, "step_%05d", st.n);
    fpsi::write_state_vtk((dir / name).string(), *spaces, st);
  };
  const auto res = fpsi::run(rc, spaces, data, std::move(initial), observer);
  auto csv = open_output(dir / "energy.csv");
  fpsi::write_energy_csv(csv, res.energy);
  if (cfg.emit_matrices) {
    const auto sys = fpsi::build_block_system(spaces, rc.params, rc.dt, rc.allow_zero_eps_bar);
    const std::pair<const char*, const fpsi::SparseMatrix*> mats[] = {
        {"A_M.mtx", &sys.A_M}, {"B_MZ.mtx", &sys.B_MZ}, {"G_M.mtx", &sys.G_M}, {"G_Z.mtx", &sys.G_Z}};
    for (const auto& [name, m] : mats) {
      auto out = open_output(dir / name);
      fpsi::write_matrix_market(out, *m);
    }
    auto out = open_output(dir / "system.mtx");
    fpsi::write_matrix_market(out, fpsi::full_matrix(sys));
  }
  const auto& last = res.energy.back();
  std::printf("steps %d  t %.6g  E0 %.10g  E %.10g\n", rc.n_steps, last.t, res.energy.front().E, last.E);
  std::printf("wrote %s\n", (dir / "energy.csv").string().c_str());
  return kOk;
}

int cmd_coercivity(const std::string& path, int levels) {
  const auto cfg = load(path);
  const double alpha1 = fpsi::alpha1_formula(cfg.params, cfg.dt);
  bool ok = true;
  std::printf("%6s %6s %22s %22s %s\n", "nx", "ny", "estimate", "alpha1", "result");
  for (int l = 0; l < levels; ++l) {
    const auto c = level_config(cfg, l);
    const auto sys = fpsi::build_block_system(fpsi::spaces_for(c.run_config()), c.params, c.dt, c.eps_bar_zero_override);
    const double est = fpsi::estimate_coercivity(sys);
    const bool pass = est >= alpha1 - 1e-9;
    ok = ok && pass;
    std::printf("%6d %6d %22.15g %22.15g %s\n", c.nx, c.ny, est, alpha1, pass ? "PASS" : "FAIL");
  }
  return ok ? kOk : kNumerical;
}

int cmd_infsup(const std::string& path, int levels) {
  const auto cfg = load(path);
  std::vector<double> values;
  std::printf("%6s %6s %22s %8s\n", "nx", "ny", "beta2", "kernel");
  for (int l = 0; l < levels; ++l) {
    const auto c = level_config(cfg, l);
    const auto sys = fpsi::build_block_system(fpsi::spaces_for(c.run_config()), c.params, c.dt, c.eps_bar_zero_override);
    const auto est = fpsi::estimate_inf_sup(sys);
    values.push_back(est.beta2);
    std::printf("%6d %6d %22.15g %8d\n", c.nx, c.ny, est.beta2, est.kernel_dimension);
  }
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  const bool pass = lo > 1e-3 && hi <= 1.25 * lo;
  std::printf("min %.15g  max/min %.6f  %s\n", lo, hi / lo, pass ? "PASS" : "FAIL");
  return pass ? kOk : kNumerical;
}

int cmd_converge(const std::string& path, int levels) {
  const auto cfg = load(path);
  const std::string id = cfg.case_id == "none" ? "trig" : cfg.case_id;
  fpsi::StudyOptions opt;
  opt.base_cells = cfg.nx;
  opt.final_time = cfg.dt * cfg.n_steps;
  const auto table = fpsi::convergence_study(fpsi::manufactured_case(id, cfg.params), levels, opt);
  fs::create_directories(cfg.output_dir);
  const fs::path file = fs::path(cfg.output_dir) / "convergence.csv";
  auto out = open_output(file);
  fpsi::write_convergence_csv(out, table);
  fpsi::write_convergence_csv(std::cout, table);
  std::printf("wrote %s\n", file.string().c_str());
  return kOk;
}

int cmd_energy_check(const std::string& path, int steps) {
  const auto cfg = load(path);
  auto rc = cfg.run_config();
  if (steps > 0) rc.n_steps = steps;
  const auto spaces = fpsi::spaces_for(rc);
  const auto data = fpsi::unforced_problem("zero");
  const auto res = fpsi::run(rc, spaces, data, fpsi::random_initial_state(*spaces, rc.dt, cfg.seed));
  const double E0 = res.energy.front().E;
  const double tol = 1e-9 * E0 / rc.dt;
  double worst = 0.0;
  bool monotone = true;
  for (std::size_t n = 1; n < res.energy.size(); ++n) {
    worst = std::max(worst, std::abs(res.energy[n].identity_residual));
    monotone = monotone && res.energy[n].E <= res.energy[n - 1].E;
  }
  fs::create_directories(cfg.output_dir);
  auto out = open_output(fs::path(cfg.output_dir) / "energy.csv");
  fpsi::write_energy_csv(out, res.energy);
  const bool pass = worst <= tol && monotone;
  std::printf("steps %d  E0 %.10g  EN %.10g  max|residual| %.3e  tolerance %.3e  monotone %s  %s\n", rc.n_steps, E0,
              res.energy.back().E, worst, tol, monotone ? "yes" : "no", pass ? "PASS" : "FAIL");
  return pass ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monolithic Stokes-Biot solver"};
  app.require_subcommand(1);
  std::string config;
  int levels = 3;
  int steps = 0;

  auto* run = app.add_subcommand("run", "time-step the configured problem");
  auto* infsup = app.add_subcommand("infsup", "estimate the discrete inf-sup constant on refined meshes");
  auto* coerc = app.add_subcommand("coercivity", "compare the coercivity estimate with its lower bound");
  auto* conv = app.add_subcommand("converge", "manufactured-solution convergence table");
  auto* energy = app.add_subcommand("energy-check", "unforced energy identity over a random start");
  for (auto* sub : {run, infsup, coerc, conv, energy}) sub->add_option("config", config, "config file")->required();
  for (auto* sub : {infsup, coerc, conv}) sub->add_option("--levels", levels, "refinement levels")->check(CLI::PositiveNumber);
  energy->add_option("--steps", steps, "number of steps (default: n_steps)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(config);
    if (*infsup) return cmd_infsup(config, levels);
    if (*coerc) return cmd_coercivity(config, levels);
    if (*conv) return cmd_converge(config, levels);
    if (*energy) return cmd_energy_check(config, steps);
  } catch (const fpsi::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation(e.kind()) ? kValidation : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kValidation;
}
