#include <gtest/gtest.h>

#include <random>

#include "fpsi/forms.hpp"

namespace {

using fpsi::Vec2;

Eigen::VectorXd stack(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

class FormsTest : public ::testing::Test {
 protected:
  void SetUp() override { spaces = fpsi::build_spaces(fpsi::standard_geometry(4)); }
  fpsi::DiscreteSpaces spaces;
  fpsi::PhysicalParams params;
};

TEST_F(FormsTest, A1ConstantVelocity) {
  params.rho_f = 2.5;
  const auto A1 = fpsi::assemble_volume_form(fpsi::VolumeForm::A1, spaces, params, 0.1);
  const Vec2 c{0.3, -1.2};
  const auto u = fpsi::interpolate(spaces.velocity, fpsi::VectorFn([&](Vec2) { return c; }));
  const Eigen::VectorXd m = stack(u, Eigen::VectorXd::Zero(spaces.displacement.dofs()));
  EXPECT_NEAR(m.dot(A1 * m), params.rho_f * fpsi::dot(c, c), 1e-12);
  const Eigen::MatrixXd d(A1);
  EXPECT_LT((d - d.transpose()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST_F(FormsTest, DivergenceOfLinearField) {
  const auto B = fpsi::assemble_volume_form(fpsi::VolumeForm::BPF, spaces, params, 0.1);
  const auto v = fpsi::interpolate(spaces.velocity, fpsi::VectorFn([](Vec2 x) { return Vec2{x.x, 0.0}; }));
  const Eigen::VectorXd q = Eigen::VectorXd::Ones(spaces.fluid_pressure.dofs());
  EXPECT_NEAR(q.dot(B * v), -1.0, 1e-13);
}

TEST_F(FormsTest, A2Constant) {
  params.s0 = 2.0;
  const auto A2 = fpsi::assemble_volume_form(fpsi::VolumeForm::A2, spaces, params, 0.5);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(spaces.pore_pressure.dofs());
  EXPECT_NEAR(one.dot(A2 * one), 8.0, 1e-12);
}

TEST_F(FormsTest, InterfaceExamples) {
  const auto& gamma = *spaces.geometry.interface;
  const auto BLM = fpsi::assemble_interface_form(fpsi::InterfaceForm::BLM, spaces, params, 0.1);
  EXPECT_NEAR(Eigen::VectorXd::Ones(BLM.rows()).dot(BLM * Eigen::VectorXd::Ones(BLM.cols())), 1.0, 1e-14);

  const auto BG1 = fpsi::assemble_interface_form(fpsi::InterfaceForm::BG1, spaces, params, 0.1);
  const auto vn = fpsi::interpolate(spaces.velocity, fpsi::VectorFn([&](Vec2) { return gamma.n_f; }));
  const Eigen::VectorXd m1 = stack(vn, Eigen::VectorXd::Zero(spaces.displacement.dofs()));
  EXPECT_NEAR(Eigen::VectorXd::Ones(BG1.rows()).dot(BG1 * m1), -1.0, 1e-14);

  const auto BG2 = fpsi::assemble_interface_form(fpsi::InterfaceForm::BG2, spaces, params, 0.1);
  const fpsi::VectorFn tau([&](Vec2) { return gamma.tau; });
  const Eigen::VectorXd m2 =
      stack(fpsi::interpolate(spaces.velocity, tau), fpsi::interpolate(spaces.displacement, tau));
  EXPECT_NEAR(Eigen::VectorXd::Ones(BG2.rows()).dot(BG2 * m2), 0.0, 1e-14);

  params.beta = 4.0;
  const auto AG = fpsi::assemble_interface_form(fpsi::InterfaceForm::AG, spaces, params, 0.5);
  EXPECT_NEAR(Eigen::VectorXd::Ones(AG.rows()).dot(AG * Eigen::VectorXd::Ones(AG.cols())), 0.5, 1e-14);

  const auto B2 = fpsi::assemble_interface_form(fpsi::InterfaceForm::B2, spaces, params, 0.1);
  const auto w = fpsi::interpolate(spaces.pore_pressure, fpsi::ScalarFn([](Vec2 x) { return x.x; }));
  EXPECT_NEAR(Eigen::VectorXd::Ones(B2.rows()).dot(B2 * w), 0.5, 1e-14);
}

TEST_F(FormsTest, BG1MatchesIndependentQuadrature) {
  const auto& gamma = *spaces.geometry.interface;
  const auto BG1 = fpsi::assemble_interface_form(fpsi::InterfaceForm::BG1, spaces, params, 0.1);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::VectorXd v(spaces.velocity.dofs()), phi(spaces.displacement.dofs()), s1(spaces.g1.dofs());
  for (auto* vec : {&v, &phi, &s1}) {
    for (int i = 0; i < vec->size(); ++i) (*vec)[i] = U(rng);
  }
  const double assembled = s1.dot(BG1 * stack(v, phi));

  // Independent evaluation: 5-point Gauss per segment, values through the element evaluators.
  const auto g = fpsi::gauss_legendre(5);
  double oracle = 0.0;
  for (int s = 0; s < static_cast<int>(gamma.segments.size()); ++s) {
    const Vec2 a = gamma.vertices[gamma.segments[s][0]], b = gamma.vertices[gamma.segments[s][1]];
    const int tf = gamma.f_edge_map[s].triangle, tp = gamma.p_edge_map[s].triangle;
    for (std::size_t k = 0; k < g.points.size(); ++k) {
      const Vec2 x = a + g.points[k].x * (b - a);
      const Vec2 vf = fpsi::evaluate_vector(spaces.velocity, v, tf, spaces.velocity.map_to_reference(tf, x));
      const Vec2 vp =
          fpsi::evaluate_vector(spaces.displacement, phi, tp, spaces.displacement.map_to_reference(tp, x));
      oracle += g.weights[k] * gamma.segment_length(s) * s1[s] *
                (-fpsi::dot(vp, gamma.n_p) - fpsi::dot(vf, gamma.n_f));
    }
  }
  EXPECT_NEAR(assembled, oracle, 1e-12);
}

TEST(HalfGram, Examples) {
  const auto g = fpsi::standard_geometry(4);
  const auto sp = fpsi::build_space(*g.interface, 1);
  const Eigen::MatrixXd S(fpsi::assemble_h_half_gram(sp));
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(sp.dofs());
  EXPECT_NEAR(one.dot(S * one), 1.0, 1e-13);
  const auto x = fpsi::interpolate(sp, fpsi::ScalarFn([](Vec2 p) { return p.x; }));
  EXPECT_NEAR(x.dot(S * x), 4.0 / 3.0, 1e-12);

  Eigen::VectorXd hat = Eigen::VectorXd::Zero(sp.dofs());
  hat[2] = 1.0;
  ASSERT_DOUBLE_EQ(sp.node_coords[2].x, 0.5);
  // Tanh-sinh reference for the hat centred at 0.5 (tools/derive_h_half.py).
  const double reference = 4.3425114970125301531;
  EXPECT_NEAR(hat.dot(S * hat) / reference, 1.0, 1e-6);

  EXPECT_LT((S - S.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  EXPECT_EQ(llt.info(), Eigen::Success);
}

TEST_F(FormsTest, LoadExamples) {
  fpsi::LoadHistory h;
  h.u = Eigen::VectorXd::Zero(spaces.velocity.dofs());
  h.eta_hat = Eigen::VectorXd::Zero(spaces.displacement.dofs());
  h.eta_hat_prev = h.eta_hat;
  h.p_hat = Eigen::VectorXd::Zero(spaces.pore_pressure.dofs());
  const fpsi::LoadData none;
  for (auto id : {fpsi::LoadId::F1, fpsi::LoadId::F2, fpsi::LoadId::F3, fpsi::LoadId::F4}) {
    EXPECT_EQ(fpsi::assemble_load(id, spaces, none, h, params, 0.1).norm(), 0.0);
  }

  h.eta_hat = fpsi::interpolate(spaces.displacement,
                                fpsi::VectorFn([&](Vec2) { return spaces.geometry.interface->n_p; }));
  EXPECT_NEAR(fpsi::assemble_load(fpsi::LoadId::F3, spaces, none, h, params, 0.1).sum(), 1.0, 1e-14);
  h.eta_hat.setZero();

  fpsi::LoadData data;
  data.fluid_force = [](Vec2) { return Vec2{1.0, 0.0}; };
  const auto f1 = fpsi::assemble_load(fpsi::LoadId::F1, spaces, data, h, params, 0.1);
  const auto M = fpsi::mass_matrix(spaces.velocity);
  const int n = spaces.velocity.n_nodes;
  const Eigen::VectorXd ones_x =
      fpsi::interpolate(spaces.velocity, fpsi::VectorFn([](Vec2) { return Vec2{1.0, 0.0}; }));
  const Eigen::VectorXd expected = 0.1 * (M * ones_x);
  EXPECT_LT((f1.head(2 * n) - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(f1.tail(spaces.displacement.dofs()).norm(), 0.0);

  fpsi::LoadHistory bad;
  EXPECT_THROW(fpsi::assemble_load(fpsi::LoadId::F1, spaces, none, bad, params, 0.1), fpsi::Error);
}

TEST(Params, Validation) {
  fpsi::PhysicalParams p;
  EXPECT_NO_THROW(p.validate());
  p.kappa = 0.0;
  EXPECT_THROW(p.validate(), fpsi::Error);
  p.kappa = 1.0;
  p.eps_bar = 0.0;
  EXPECT_THROW(p.validate(), fpsi::Error);
  EXPECT_NO_THROW(p.validate(true));
}

}  // namespace

TEST(HHalfSeminorm, ConstantsAndLinear) {
  for (int n : {1, 2, 4, 8}) {
    const auto s = fpsi::build_spaces(fpsi::standard_geometry(n));
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(s.lambda.dofs(), 2.5);
    EXPECT_EQ(fpsi::h_half_seminorm_squared(s.lambda, c), 0.0);
    const auto x = fpsi::interpolate(s.lambda, fpsi::ScalarFn([](fpsi::Vec2 p) { return p.x; }));
    EXPECT_NEAR(fpsi::h_half_seminorm_squared(s.lambda, x), 1.0, 1e-12);
    const Eigen::MatrixXd G(fpsi::assemble_h_half_gram(s.lambda));
    const Eigen::MatrixXd M(fpsi::mass_matrix(s.lambda));
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(s.lambda.dofs(), -1.0, 2.0).array().square();
    EXPECT_NEAR(v.dot((G - M) * v), fpsi::h_half_seminorm_squared(s.lambda, v), 1e-12);
  }
}
