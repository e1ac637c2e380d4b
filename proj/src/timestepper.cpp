#include "fpsi/timestepper.hpp"

#include <random>

#include "fpsi/analysis.hpp"

namespace fpsi {

namespace {

void zero_fixed(Eigen::VectorXd& v, const FunctionSpace& sp) {
  for (int i = 0; i < sp.dofs(); ++i) {
    if (sp.dirichlet[i]) v[i] = 0.0;
  }
}

template <class Fn>
auto freeze(const Fn& f, double t) {
  using R = decltype(f(Vec2{}, t));
  return std::function<R(Vec2)>([f, t](Vec2 x) { return f(x, t); });
}

}  // namespace

LoadData loads_at(const ProblemData& d, const BlockSystem& system, double t) {
  LoadData out;
  if (d.fluid_force) out.fluid_force = freeze(d.fluid_force, t);
  if (d.solid_force) out.solid_force = freeze(d.solid_force, t);
  if (d.pressure_source) out.pressure_source = freeze(d.pressure_source, t);
  if (d.fluid_traction) out.fluid_traction = freeze(d.fluid_traction, t);
  if (d.solid_traction) out.solid_traction = freeze(d.solid_traction, t);
  if (d.pressure_flux) out.pressure_flux = freeze(d.pressure_flux, t);
  if (d.stress_jump) out.stress_jump = freeze(d.stress_jump, t);
  if (d.mass_defect) out.mass_defect = freeze(d.mass_defect, t);
  if (d.slip_defect) out.slip_defect = freeze(d.slip_defect, t);
  if (d.pressure_defect) out.pressure_defect = freeze(d.pressure_defect, t);
  if (d.lambda_shift) out.lambda_shift = d.lambda_shift(system, t);
  return out;
}

State init_state(const DiscreteSpaces& s, const InitialData& init, double dt) {
  if (!init.u || !init.eta || !init.eta_dot || !init.p_p) {
    throw Error(ErrorKind::MissingInitialData, "initial velocity, displacement, displacement rate and pressure are required");
  }
  if (!(dt > 0.0)) throw Error(ErrorKind::NonPositiveParam, "dt must be positive");
  State st;
  st.u = interpolate(s.velocity, init.u);
  st.eta = interpolate(s.displacement, init.eta);
  st.eta_dot = interpolate(s.displacement, init.eta_dot);
  st.p_p = interpolate(s.pore_pressure, init.p_p);
  zero_fixed(st.u, s.velocity);
  zero_fixed(st.eta, s.displacement);
  zero_fixed(st.eta_dot, s.displacement);
  zero_fixed(st.p_p, s.pore_pressure);
  st.p_f = Eigen::VectorXd::Zero(s.fluid_pressure.dofs());
  st.g1 = Eigen::VectorXd::Zero(s.g1.dofs());
  st.g2 = Eigen::VectorXd::Zero(s.g2.dofs());
  st.lambda = Eigen::VectorXd::Zero(s.lambda.dofs());
  st.eta_prev = st.eta - dt * st.eta_dot;
  st.u_prev = st.u;
  st.p_prev = st.p_p;
  st.eta_dot_prev = st.eta_dot;
  return st;
}

LoadHistory history_of(const State& st, double dt) {
  LoadHistory h;
  h.u = st.u;
  h.eta_hat = st.eta / dt;
  h.eta_hat_prev = st.eta_prev / dt;
  h.p_hat = dt * st.p_p;
  return h;
}

Stepper make_stepper(std::shared_ptr<const DiscreteSpaces> spaces, const PhysicalParams& params, double dt,
                     bool allow_zero_eps_bar) {
  Stepper s;
  s.system = build_block_system(std::move(spaces), params, dt, allow_zero_eps_bar);
  s.factorization = factorize(full_matrix(s.system));
  return s;
}

State step(const Stepper& stepper, const State& st, const LoadData& loads) {
  const auto& sys = stepper.system;
  const double dt = sys.dt;
  if (st.u.size() != sys.size(Field::Velocity) || st.eta.size() != sys.size(Field::Displacement) ||
      st.eta_prev.size() != st.eta.size() || st.p_p.size() != sys.size(Field::PorePressure)) {
    throw Error(ErrorKind::MissingHistory, "state does not match the system");
  }
  State next;
  next.rhs = assemble_rhs(sys, loads, history_of(st, dt));
  next.scaled = stepper.factorization.solve(next.rhs);
  const auto block = [&](Field f) -> Eigen::VectorXd { return next.scaled.segment(sys.offset(f), sys.size(f)); };
  next.n = st.n + 1;
  next.t = next.n * dt;
  next.u = block(Field::Velocity);
  next.eta = dt * block(Field::Displacement);
  next.p_p = block(Field::PorePressure) / dt;
  next.g2 = block(Field::G2) / dt;
  next.lambda = block(Field::Lambda);
  next.p_f = block(Field::FluidPressure) / dt;
  next.g1 = block(Field::G1) / dt;
  next.eta_dot = (next.eta - st.eta) / dt;
  next.eta_prev = st.eta;
  next.u_prev = st.u;
  next.p_prev = st.p_p;
  next.eta_dot_prev = st.eta_dot;
  return next;
}

State random_initial_state(const DiscreteSpaces& s, double dt, unsigned seed) {
  if (!(dt > 0.0)) throw Error(ErrorKind::NonPositiveParam, "dt must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto fill = [&](const FunctionSpace& sp) {
    Eigen::VectorXd v(sp.dofs());
    for (int i = 0; i < v.size(); ++i) v[i] = sp.dirichlet[i] ? 0.0 : unit(rng);
    return v;
  };
  State st;
  st.u = fill(s.velocity);
  st.eta = fill(s.displacement);
  st.eta_dot = fill(s.displacement);
  st.p_p = fill(s.pore_pressure);
  st.p_f = Eigen::VectorXd::Zero(s.fluid_pressure.dofs());
  st.g1 = Eigen::VectorXd::Zero(s.g1.dofs());
  st.g2 = Eigen::VectorXd::Zero(s.g2.dofs());
  st.lambda = Eigen::VectorXd::Zero(s.lambda.dofs());
  st.eta_prev = st.eta - dt * st.eta_dot;
  st.u_prev = st.u;
  st.p_prev = st.p_p;
  st.eta_dot_prev = st.eta_dot;
  return st;
}

std::shared_ptr<const DiscreteSpaces> spaces_for(const RunConfig& cfg) {
  return std::make_shared<const DiscreteSpaces>(build_spaces(build_geometry(cfg.fluid, cfg.poro, cfg.nx, cfg.ny)));
}

RunResult run(const RunConfig& cfg, const ProblemData& data,
              const std::function<void(const State&, const EnergyReport&)>& observer) {
  const auto spaces = spaces_for(cfg);
  return run(cfg, spaces, data, init_state(*spaces, data.initial, cfg.dt), observer);
}

RunResult run(const RunConfig& cfg, std::shared_ptr<const DiscreteSpaces> spaces, const ProblemData& data,
              State initial, const std::function<void(const State&, const EnergyReport&)>& observer) {
  if (cfg.n_steps < 1) throw Error(ErrorKind::BadValue, "n_steps must be at least 1");
  cfg.params.validate(cfg.allow_zero_eps_bar);
  RunResult out;
  out.spaces = std::move(spaces);
  const Stepper stepper = make_stepper(out.spaces, cfg.params, cfg.dt, cfg.allow_zero_eps_bar);
  const EnergyNorms norms = build_energy_norms(*out.spaces);

  out.trajectory.push_back(std::move(initial));
  out.energy.push_back(energy(norms, out.trajectory.back(), cfg.params, cfg.dt));
  if (observer) observer(out.trajectory.back(), out.energy.back());
  for (int k = 0; k < cfg.n_steps; ++k) {
    const State& prev = out.trajectory.back();
    const LoadData loads = loads_at(data, stepper.system, (prev.n + 1) * cfg.dt);
    State next = step(stepper, prev, loads);
    EnergyReport rep = energy(norms, next, cfg.params, cfg.dt);
    rep.identity_residual = check_energy_identity(norms, *out.spaces, prev, next, loads, cfg.params, cfg.dt);
    out.trajectory.push_back(std::move(next));
    out.energy.push_back(rep);
    if (observer) observer(out.trajectory.back(), out.energy.back());
  }
  return out;
}

}  // namespace fpsi
