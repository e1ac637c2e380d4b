#include "fpsi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpsi/solver.hpp"

namespace fpsi {

namespace {

double quad(const SparseMatrix& m, const Eigen::VectorXd& v) { return v.dot(m * v); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw Error(ErrorKind::NonPositiveParam, std::string(name) + " must be positive");
}

Eigen::MatrixXd dense_block(const SparseMatrix& m, int r0, int c0, int rows, int cols) {
  return Eigen::MatrixXd(m).block(r0, c0, rows, cols);
}

}  // namespace

EnergyNorms build_energy_norms(const DiscreteSpaces& s) {
  EnergyNorms n;
  n.mass_u = mass_matrix(s.velocity);
  n.strain_u = strain_matrix(s.velocity);
  n.mass_x = mass_matrix(s.displacement);
  n.strain_x = strain_matrix(s.displacement);
  n.div_x = div_div_matrix(s.displacement);
  n.mass_p = mass_matrix(s.pore_pressure);
  n.grad_p = stiffness_matrix(s.pore_pressure);
  n.mass_g2 = mass_matrix(s.g2);
  n.h_half = assemble_h_half_gram(s.lambda);
  n.mass_pf = mass_matrix(s.fluid_pressure);
  PhysicalParams unit;
  const Eigen::MatrixXd R(assemble_interface_form(InterfaceForm::BLM, s, unit, 1.0));
  const Eigen::MatrixXd S(n.h_half);
  const Eigen::MatrixXd dual = R * S.llt().solve(R.transpose());
  n.dual_g1 = (0.5 * (dual + dual.transpose())).sparseView();
  return n;
}

double elastic_energy(const EnergyNorms& n, const Eigen::VectorXd& eta, const PhysicalParams& p) {
  return 2.0 * p.nu_p * quad(n.strain_x, eta) + p.lambda * quad(n.div_x, eta);
}

EnergyReport energy(const EnergyNorms& n, const State& st, const PhysicalParams& p, double dt) {
  EnergyReport r;
  r.n = st.n;
  r.t = st.t;
  r.E = p.rho_f * quad(n.mass_u, st.u) + p.rho_p * quad(n.mass_x, st.eta_dot) + p.s0 * quad(n.mass_p, st.p_p) +
        elastic_energy(n, st.eta, p);
  const Eigen::VectorXd eta_dd = (st.eta_dot - st.eta_dot_prev) / dt;
  const Eigen::VectorXd u_d = (st.u - st.u_prev) / dt;
  const Eigen::VectorXd p_d = (st.p_p - st.p_prev) / dt;
  r.diss_eta_dd = p.rho_p * dt * quad(n.mass_x, eta_dd);
  r.diss_u_d = p.rho_f * dt * quad(n.mass_u, u_d);
  r.diss_pp_d = p.s0 * dt * quad(n.mass_p, p_d);
  r.diss_eta_E = dt * elastic_energy(n, st.eta_dot, p);
  r.diss_Du = 2.0 * p.nu_f * quad(n.strain_u, st.u);
  r.diss_gradpp = p.kappa * quad(n.grad_p, st.p_p);
  r.diss_g2 = 2.0 / p.beta * quad(n.mass_g2, st.g2);
  r.diss_lambda = 2.0 * (p.eps_bar / dt) * quad(n.h_half, st.lambda);
  return r;
}

EnergyReport energy(const DiscreteSpaces& spaces, const State& st, const PhysicalParams& p, double dt) {
  return energy(build_energy_norms(spaces), st, p, dt);
}

double check_energy_identity(const EnergyNorms& n, const DiscreteSpaces& s, const State& prev, const State& next,
                             const LoadData& loads, const PhysicalParams& p, double dt) {
  if (next.n != prev.n + 1 || next.eta_prev.size() != prev.eta.size() || next.eta_prev != prev.eta ||
      next.u_prev != prev.u) {
    throw Error(ErrorKind::HistoryMismatch, "states are not consecutive");
  }
  const EnergyReport a = energy(n, prev, p, dt);
  const EnergyReport b = energy(n, next, p, dt);

  LoadHistory zero;
  zero.u = Eigen::VectorXd::Zero(s.velocity.dofs());
  zero.eta_hat = Eigen::VectorXd::Zero(s.displacement.dofs());
  zero.eta_hat_prev = zero.eta_hat;
  zero.p_hat = Eigen::VectorXd::Zero(s.pore_pressure.dofs());
  const Eigen::VectorXd f1 = assemble_load(LoadId::F1, s, loads, zero, p, dt);
  const Eigen::VectorXd f2 = assemble_load(LoadId::F2, s, loads, zero, p, dt);
  Eigen::VectorXd ue(f1.size());
  ue << next.u, next.eta_dot;
  const double work = f1.dot(ue) / dt + f2.dot(next.p_p);

  return (b.E - a.E) / (2.0 * dt) +
         0.5 * (b.diss_u_d + b.diss_eta_dd + b.diss_pp_d + b.diss_eta_E) + b.diss_Du + b.diss_gradpp +
         0.5 * b.diss_g2 + 0.5 * b.diss_lambda - work;
}

double alpha1_formula(const PhysicalParams& p, double dt) {
  p.validate();
  require_positive(dt, "dt");
  return std::min({p.rho_f, 2.0 * p.nu_f * dt, p.rho_p, 2.0 * p.nu_p * dt * dt, p.s0 / (dt * dt), p.kappa / dt,
                   1.0 / (p.beta * dt), p.eps_bar});
}

double estimate_coercivity(const Eigen::MatrixXd& A, const Eigen::MatrixXd& G) {
  return gen_eig_extreme(0.5 * (A + A.transpose()), G, Extreme::Smallest).value;
}

double estimate_coercivity(const BlockSystem& sys, bool full_gradient_gram) {
  const auto free = sys.free_M();
  const Eigen::MatrixXd A = submatrix(sys.A_M, free, free);
  const Eigen::MatrixXd G = submatrix(full_gradient_gram ? sys.G_M_full_gradient : sys.G_M, free, free);
  return estimate_coercivity(A, G);
}

InfSupEstimate estimate_inf_sup(const Eigen::MatrixXd& B, const Eigen::MatrixXd& GM, const Eigen::MatrixXd& GZ) {
  if (B.cols() != GM.rows() || B.rows() != GZ.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "inf-sup blocks have inconsistent sizes");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (GM + GM.transpose()));
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotSPD, "M Gram is not positive definite");
  const Eigen::MatrixXd C = B * llt.solve(B.transpose());
  const Eigen::MatrixXd Cs = 0.5 * (C + C.transpose());
  const Eigen::MatrixXd Zs = 0.5 * (GZ + GZ.transpose());
  if (Zs.llt().info() != Eigen::Success) throw Error(ErrorKind::NotSPD, "Z Gram is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Cs, Zs, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  InfSupEstimate out;
  out.smallest = ev[0];
  const double tol = 1e-10 * std::max(ev[ev.size() - 1], 1e-300);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= tol) {
      ++out.kernel_dimension;
    } else {
      out.beta2 = std::sqrt(ev[i]);
      break;
    }
  }
  return out;
}

InfSupEstimate estimate_inf_sup(const BlockSystem& sys) {
  const auto fm = sys.free_M();
  const auto fz = sys.free_Z();
  return estimate_inf_sup(submatrix(sys.B_MZ, fz, fm), submatrix(sys.G_M, fm, fm), submatrix(sys.G_Z, fz, fz));
}

StabilityConstants stability_constants(const PhysicalParams& p, double dt, int N, const DomainConstants& dc,
                                       double beta2) {
  p.validate();
  require_positive(dt, "dt");
  if (N < 1) throw Error(ErrorKind::NonPositiveParam, "N must be at least 1");
  require_positive(dc.C_T, "C_T");
  require_positive(dc.C_K, "C_K");
  require_positive(dc.C_P, "C_P");
  require_positive(beta2, "beta2");
  constexpr double d = 2.0;
  StabilityConstants c;
  c.alpha1 = alpha1_formula(p, dt);
  c.C_KP = std::max(1.0 + dc.C_K * dc.C_K * dc.C_P * dc.C_P, 1.0 + dc.C_P * dc.C_P);
  c.C_eta = c.C_KP / (2.0 * p.nu_p);
  c.C1 = dc.C_T * std::sqrt(c.C_KP);
  c.C2 = std::sqrt(d) * dc.C_K * dc.C_P;
  c.K1 = std::max(2.0 * p.nu_p, d * p.lambda * dc.C_K * dc.C_K);
  c.K2 = std::max(c.C1 * c.C1 / (2.0 * p.nu_p), p.alpha * p.alpha / p.lambda);
  c.K3 = 1.0 + 1.0 / N;
  const double CT = dc.C_T;
  const auto sq = [](double x) { return x * x; };
  c.eps1 = 0.5 * std::min({1.0 / (70.0 * p.rho_p), 1.0 / (70.0 * p.rho_f), 1.0 / (70.0 * p.s0), 1.0 / (70.0 * c.K2),
                           2.0 * p.nu_f / (70.0 * dt * sq(2.0 * p.nu_f + c.C1)),
                           p.kappa / (70.0 * dt * sq(p.kappa + c.C1 + p.alpha * c.C2)),
                           2.0 / (70.0 * p.beta * dt * sq(2.0 * CT + 1.0 / p.beta)),
                           2.0 * p.eps_bar / (70.0 * dt * sq(CT + p.eps_bar)),
                           1.0 / (dt * dt * (c.C_eta + 70.0 * c.K1))});
  const double e1 = c.eps1;
  c.eps2 = 1.0 - dt * dt * e1 * (c.C_eta + 70.0 * c.K1);
  c.C_bar = std::min({c.eps2, c.K3 * p.rho_f, c.K3 * p.rho_p, c.K3 * p.s0, p.rho_p * dt * (1.0 - 70.0 * e1 * p.rho_p),
                      p.rho_f * dt * (1.0 - 70.0 * e1 * p.rho_f), p.s0 * dt * (1.0 - 70.0 * e1 * p.s0),
                      dt * (1.0 - 70.0 * e1 * c.K2), 2.0 * p.nu_f - 70.0 * e1 * dt * sq(2.0 * p.nu_f + c.C1),
                      p.kappa - 70.0 * e1 * dt * sq(p.kappa + c.C1 + p.alpha * c.C2),
                      2.0 / p.beta - 70.0 * e1 * dt * sq(2.0 * CT + 1.0 / p.beta),
                      2.0 * p.eps_bar - 70.0 * e1 * dt * sq(CT + p.eps_bar), e1 * dt * beta2 * beta2});
  c.C_star = std::exp((N / c.eps2 + 1.0 / c.eps2) * (c.C_eta + 70.0 * e1 * dt * dt * c.K1));
  return c;
}

double dual_norm_minus_half(const Eigen::VectorXd& s, const BlockSystem& sys) {
  const int o = sys.offset(Field::G1) - sys.dim_M();
  const int n = sys.size(Field::G1);
  if (s.size() != n) throw Error(ErrorKind::DimensionMismatch, "multiplier vector has the wrong size");
  const Eigen::MatrixXd G = dense_block(sys.G_Z, o, o, n, n);
  return std::sqrt(std::max(0.0, s.dot(G * s)));
}

TheoremBound theorem_bound(const BlockSystem& sys, const std::vector<State>& traj, const StabilityConstants& c) {
  if (traj.size() < 2) throw Error(ErrorKind::MissingHistory, "trajectory needs at least one step");
  const auto& p = sys.params;
  const double dt = sys.dt;
  const EnergyNorms n = build_energy_norms(*sys.spaces);
  const int N = static_cast<int>(traj.size()) - 1;
  const auto el = [&](const Eigen::VectorXd& v) { return elastic_energy(n, v, p); };

  const State& last = traj.back();
  TheoremBound tb;
  tb.lhs = el(last.eta) + quad(n.mass_u, last.u) + quad(n.mass_x, last.eta_dot) + quad(n.mass_p, last.p_p);
  double sum = 0.0;
  for (const auto& st : traj) {
    const Eigen::VectorXd eta_dd = (st.eta_dot - st.eta_dot_prev) / dt;
    const Eigen::VectorXd u_d = (st.u - st.u_prev) / dt;
    const Eigen::VectorXd p_d = (st.p_p - st.p_prev) / dt;
    sum += quad(n.mass_x, eta_dd) + quad(n.mass_u, u_d) + quad(n.mass_p, p_d) + el(st.eta_dot) +
           quad(n.strain_u, st.u) + quad(n.grad_p, st.p_p) + quad(n.mass_g2, st.g2) + quad(n.h_half, st.lambda) +
           quad(n.mass_pf, st.p_f) + quad(n.dual_g1, st.g1);
  }
  tb.lhs += dt * sum;

  const State& s0 = traj.front();
  const Eigen::VectorXd eta_dd0 = (s0.eta_dot - s0.eta_dot_prev) / dt;
  const Eigen::VectorXd u_d0 = (s0.u - s0.u_prev) / dt;
  const Eigen::VectorXd p_d0 = (s0.p_p - s0.p_prev) / dt;
  const double initial = (1.0 + 1.0 / N) * (p.rho_f * quad(n.mass_u, s0.u) + p.rho_p * quad(n.mass_x, s0.eta_dot) +
                                            p.s0 * quad(n.mass_p, s0.p_p) + (1.0 + 2.0 * c.C_eta) * el(s0.eta));
  const double start = p.rho_p * dt * dt * quad(n.mass_x, eta_dd0) + p.rho_f * dt * dt * quad(n.mass_u, u_d0) +
                       p.s0 * dt * dt * quad(n.mass_p, p_d0) + dt * dt * el(s0.eta_dot) +
                       2.0 * p.nu_f * dt * quad(n.strain_u, s0.u) + p.kappa * dt * quad(n.grad_p, s0.p_p) +
                       2.0 * dt / p.beta * quad(n.mass_g2, s0.g2) + 2.0 * p.eps_bar * dt * quad(n.h_half, s0.lambda) +
                       c.eps1 * dt * dt * (quad(n.mass_pf, s0.p_f) + quad(n.dual_g1, s0.g1));
  tb.rhs = c.C_star / c.C_bar * (initial + start);
  return tb;
}

}  // namespace fpsi
