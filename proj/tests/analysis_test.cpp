#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fpsi/analysis.hpp"
#include "fpsi/timestepper.hpp"

namespace {

using fpsi::Vec2;

std::shared_ptr<const fpsi::DiscreteSpaces> spaces_on(const fpsi::Geometry& g) {
  return std::make_shared<const fpsi::DiscreteSpaces>(fpsi::build_spaces(g));
}

fpsi::State empty_state(const fpsi::DiscreteSpaces& s) {
  fpsi::InitialData d;
  d.u = d.eta = d.eta_dot = [](Vec2) { return Vec2{}; };
  d.p_p = [](Vec2) { return 0.0; };
  return fpsi::init_state(s, d, 0.1);
}

TEST(Energy, ZeroAndConstant) {
  const auto s = spaces_on(fpsi::standard_geometry(2));
  fpsi::PhysicalParams p;
  p.rho_f = 3.0;
  auto st = empty_state(*s);
  const auto r0 = fpsi::energy(*s, st, p, 0.1);
  EXPECT_EQ(r0.E, 0.0);
  EXPECT_EQ(r0.diss_Du + r0.diss_eta_E + r0.diss_lambda + r0.diss_g2 + r0.diss_gradpp, 0.0);

  const Vec2 c{1.5, -0.5};
  st.u = fpsi::interpolate(s->velocity, fpsi::VectorFn([c](Vec2) { return c; }));
  st.u_prev = st.u;
  EXPECT_NEAR(fpsi::energy(*s, st, p, 0.1).E, p.rho_f * fpsi::dot(c, c), 1e-12);
}

TEST(Energy, RandomStateMatchesQuadrature) {
  const auto s = spaces_on(fpsi::standard_geometry(3));
  fpsi::PhysicalParams p;
  p.rho_f = 1.2;
  p.rho_p = 0.8;
  p.s0 = 0.4;
  p.nu_p = 0.7;
  p.lambda = 2.2;
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(-1, 1);
  auto st = empty_state(*s);
  for (auto* v : {&st.u, &st.eta, &st.eta_dot, &st.p_p}) {
    for (int i = 0; i < v->size(); ++i) (*v)[i] = U(rng);
  }
  const double E = fpsi::energy(*s, st, p, 0.1).E;

  const auto q = fpsi::quadrature_rule(fpsi::CellType::Triangle, 6);
  double ref = 0.0;
  for (int c = 0; c < s->velocity.cells(); ++c) {
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const double w = q.weights[k] * s->velocity.jacobian(c);
      const Vec2 u = fpsi::evaluate_vector(s->velocity, st.u, c, q.points[k]);
      ref += w * p.rho_f * fpsi::dot(u, u);
    }
  }
  for (int c = 0; c < s->displacement.cells(); ++c) {
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const double w = q.weights[k] * s->displacement.jacobian(c);
      const Vec2 ed = fpsi::evaluate_vector(s->displacement, st.eta_dot, c, q.points[k]);
      const auto G = fpsi::evaluate_vector_gradient(s->displacement, st.eta, c, q.points[k]);
      const double pp = fpsi::evaluate_scalar(s->pore_pressure, st.p_p, c, q.points[k]);
      const double d01 = 0.5 * (G[0][1] + G[1][0]);
      const double strain = G[0][0] * G[0][0] + G[1][1] * G[1][1] + 2 * d01 * d01;
      const double div = G[0][0] + G[1][1];
      ref += w * (p.rho_p * fpsi::dot(ed, ed) + p.s0 * pp * pp + 2 * p.nu_p * strain + p.lambda * div * div);
    }
  }
  EXPECT_NEAR(E / ref, 1.0, 1e-11);
}

TEST(Alpha1, Examples) {
  fpsi::PhysicalParams p;
  p.eps_bar = 1.0;
  EXPECT_DOUBLE_EQ(fpsi::alpha1_formula(p, 1.0), 1.0);
  p.eps_bar = 0.01;
  EXPECT_DOUBLE_EQ(fpsi::alpha1_formula(p, 0.1), 0.01);
  p.eps_bar = 1e6;
  p.rho_f = p.rho_p = p.kappa = 1e6;
  p.nu_f = p.nu_p = 1e10;
  p.beta = 1e-6;
  double prev = fpsi::alpha1_formula(p, 0.01);
  for (double dt : {0.02, 0.04, 0.08}) {
    const double a = fpsi::alpha1_formula(p, dt);
    EXPECT_LE(a, prev);
    prev = a;
  }
  p.s0 = -1.0;
  EXPECT_THROW(fpsi::alpha1_formula(p, 0.1), fpsi::Error);
}

TEST(Coercivity, SmallestMeshAboveAlpha1) {
  const fpsi::PhysicalParams p;
  for (double dt : {1.0, 0.1}) {
    const auto sys = fpsi::build_block_system(spaces_on(fpsi::standard_geometry(1)), p, dt);
    EXPECT_GE(fpsi::estimate_coercivity(sys), fpsi::alpha1_formula(p, dt) - 1e-9);
  }
}

TEST(Coercivity, ReflectionSymmetry) {
  const fpsi::PhysicalParams p;
  const auto horizontal = fpsi::build_geometry({0, 0, 1, 1}, {0, 1, 1, 2}, 3, 2);
  const auto vertical = fpsi::build_geometry({0, 0, 1, 1}, {1, 0, 2, 1}, 2, 3);
  const double a = fpsi::estimate_coercivity(fpsi::build_block_system(spaces_on(horizontal), p, 0.5));
  const double b = fpsi::estimate_coercivity(fpsi::build_block_system(spaces_on(vertical), p, 0.5));
  EXPECT_NEAR(a, b, 1e-8);
}

TEST(Coercivity, ScaleInvariance) {
  const auto sys = fpsi::build_block_system(spaces_on(fpsi::standard_geometry(1)), fpsi::PhysicalParams{}, 0.3);
  const auto free = sys.free_M();
  const Eigen::MatrixXd A = fpsi::submatrix(sys.A_M, free, free);
  const Eigen::MatrixXd G = fpsi::submatrix(sys.G_M, free, free);
  EXPECT_NEAR(fpsi::estimate_coercivity(A, G), fpsi::estimate_coercivity(2.0 * A, 2.0 * G), 1e-12);
}

TEST(InfSup, Identity) {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_NEAR(fpsi::estimate_inf_sup(I, I, I).beta2, 1.0, 1e-14);
}

TEST(InfSup, SamplingOracle) {
  Eigen::MatrixXd B(2, 4), GM(4, 4), GZ(2, 2);
  B << 1.0, 0.3, -0.2, 0.5, 0.1, -0.7, 0.9, 0.2;
  GM << 2.0, 0.3, 0.0, 0.1, 0.3, 1.5, 0.2, 0.0, 0.0, 0.2, 1.2, -0.1, 0.1, 0.0, -0.1, 0.9;
  GZ << 1.3, 0.4, 0.4, 0.8;
  const double est = fpsi::estimate_inf_sup(B, GM, GZ).beta2;
  // inf over unit directions of Z; the inner sup over M is sqrt(zᵀ B G_M⁻¹ Bᵀ z).
  const Eigen::MatrixXd C = B * GM.inverse() * B.transpose();
  double best = 1e300;
  for (int k = 0; k < 20000; ++k) {
    const double th = M_PI * k / 20000.0;
    const Eigen::Vector2d z(std::cos(th), std::sin(th));
    best = std::min(best, std::sqrt(z.dot(C * z) / z.dot(GZ * z)));
  }
  EXPECT_NEAR(est, best, 1e-3);
}

TEST(InfSup, RefinementBand) {
  std::vector<double> values;
  for (int n : {2, 4, 8}) {
    const auto sys = fpsi::build_block_system(spaces_on(fpsi::standard_geometry(n)), fpsi::PhysicalParams{}, 0.1);
    const auto est = fpsi::estimate_inf_sup(sys);
    EXPECT_EQ(est.kernel_dimension, 0);
    EXPECT_GT(est.beta2, 0.0);
    values.push_back(est.beta2);
  }
  const double hi = *std::max_element(values.begin(), values.end());
  const double lo = *std::min_element(values.begin(), values.end());
  EXPECT_LE(hi / lo, 1.25) << values[0] << " " << values[1] << " " << values[2];
}

TEST(Stability, Constants) {
  fpsi::PhysicalParams p;
  p.eps_bar = 1.0;
  const double dt = 0.1;
  const auto c = fpsi::stability_constants(p, dt, 10);
  EXPECT_DOUBLE_EQ(c.K3, 1.1);
  // Direct evaluation of the nine candidates with C_T = 2, C_K = 2, C_P = 1.
  const double CKP = 5.0, Ceta = 2.5, C1 = 2.0 * std::sqrt(5.0), C2 = std::sqrt(2.0) * 2.0;
  const double K1 = std::max(2.0, 2.0 * 4.0), K2 = std::max(C1 * C1 / 2.0, 1.0);
  const double cands[9] = {1.0 / 70, 1.0 / 70, 1.0 / 70, 1.0 / (70 * K2),
                           2.0 / (70 * dt * std::pow(2 + C1, 2)), 1.0 / (70 * dt * std::pow(1 + C1 + C2, 2)),
                           2.0 / (70 * dt * std::pow(4 + 1, 2)), 2.0 / (70 * dt * std::pow(2 + 1, 2)),
                           1.0 / (dt * dt * (Ceta + 70 * K1))};
  EXPECT_NEAR(c.eps1, 0.5 * *std::min_element(cands, cands + 9), 1e-15);
  EXPECT_DOUBLE_EQ(c.C_KP, CKP);
  EXPECT_GT(c.eps2, 0.0);
  EXPECT_GT(c.C_bar, 0.0);
  EXPECT_GT(c.C_star, 1.0);
  EXPECT_THROW(fpsi::stability_constants(p, -1.0, 10), fpsi::Error);
}

TEST(DualNorm, Examples) {
  const auto sys = fpsi::build_block_system(spaces_on(fpsi::standard_geometry(1)), fpsi::PhysicalParams{}, 0.1);
  const int n = sys.size(fpsi::Field::G1);
  EXPECT_EQ(fpsi::dual_norm_minus_half(Eigen::VectorXd::Zero(n), sys), 0.0);
  // One segment: the optimal μ is constant by symmetry, so the value is ⟨1,1⟩/‖1‖_{1/2} = 1.
  EXPECT_NEAR(fpsi::dual_norm_minus_half(Eigen::VectorXd::Ones(n), sys), 1.0, 1e-13);

  const auto sys4 = fpsi::build_block_system(spaces_on(fpsi::standard_geometry(4)), fpsi::PhysicalParams{}, 0.1);
  Eigen::VectorXd s(4);
  s << 0.3, -1.0, 2.0, 0.5;
  EXPECT_NEAR(fpsi::dual_norm_minus_half(2.0 * s, sys4), 2.0 * fpsi::dual_norm_minus_half(s, sys4), 1e-13);
}

TEST(Stability, TheoremBoundUnforced) {
  fpsi::RunConfig cfg;
  cfg.nx = cfg.ny = 2;
  cfg.dt = 0.05;
  cfg.n_steps = 10;
  fpsi::ProblemData d;
  d.initial.u = [](Vec2 x) { return Vec2{std::sin(M_PI * x.x), 0.0}; };
  d.initial.eta = [](Vec2 x) { return Vec2{0.0, 0.1 * std::sin(M_PI * x.x)}; };
  d.initial.eta_dot = [](Vec2) { return Vec2{}; };
  d.initial.p_p = [](Vec2 x) { return std::sin(M_PI * x.x); };
  const auto res = fpsi::run(cfg, d);
  const auto sys = fpsi::build_block_system(res.spaces, cfg.params, cfg.dt);
  const auto beta2 = fpsi::estimate_inf_sup(sys).beta2;
  const auto c = fpsi::stability_constants(cfg.params, cfg.dt, cfg.n_steps, {}, beta2);
  const auto tb = fpsi::theorem_bound(sys, res.trajectory, c);
  EXPECT_TRUE(tb.holds()) << tb.lhs << " " << tb.rhs;
}

}  // namespace
