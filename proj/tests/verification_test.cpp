#include <gtest/gtest.h>

#include <map>
#include <random>

#include "fpsi/verification.hpp"

namespace {

using fpsi::Vec2;

struct Frozen {
  const char* name;
  Vec2 x;
  double t;
  std::vector<double> values;
};

// Values produced by tools/derive_manufactured.py.
const std::vector<Frozen> kFrozen = {
    {"fluid_force", {0.3, 0.7}, 0.25, {-10.256330296034331, -63.745323728609065}},
    {"fluid_force", {0.81, 1.3}, 0.6, {3.9286632594465689, -44.267594527136531}},
    {"fluid_force", {0.5, 1.0}, 0.1, {-52.378792256104923, 0}},
    {"solid_force", {0.3, 0.7}, 0.25, {-12.680469431607541, 36.441038677947866}},
    {"solid_force", {0.81, 1.3}, 0.6, {-16.613605133982944, -2.1412209524995358}},
    {"solid_force", {0.5, 1.0}, 0.1, {-48.145406701817969, 0}},
    {"pressure_source", {0.3, 0.7}, 0.25, {-0.40089052624832505}},
    {"pressure_source", {0.81, 1.3}, 0.6, {-1.1979112281417166}},
    {"pressure_source", {0.5, 1.0}, 0.1, {-2.6317092408169014}},
    {"fluid_traction", {0.3, 0.7}, 0.25, {0.15877102816516447, -6.284672110916933}},
    {"fluid_traction", {0.81, 1.3}, 0.6, {-3.227539766920434, 4.4110752560973605}},
    {"fluid_traction", {0.5, 1.0}, 0.1, {0, 0}},
    {"solid_traction", {0.3, 0.7}, 0.25, {-0.52548773268611271, -5.9109440488130707}},
    {"solid_traction", {0.81, 1.3}, 0.6, {2.3252281890187261, -0.76551282858559111}},
    {"solid_traction", {0.5, 1.0}, 0.1, {0, -10.930915464870434}},
    {"pressure_flux", {0.3, 0.7}, 0.25, {-0.48041083760952635}},
    {"pressure_flux", {0.81, 1.3}, 0.6, {0.23520839868465029}},
    {"pressure_flux", {0.5, 1.0}, 0.1, {0}},
    {"stress_jump", {0.3, 0.7}, 0.25, {0.36671670452094823, 12.195616159730005}},
    {"stress_jump", {0.81, 1.3}, 0.6, {0.90231157790170802, -3.6455624275117691}},
    {"stress_jump", {0.5, 1.0}, 0.1, {0, 10.930915464870434}},
    {"mass_defect", {0.3, 0.7}, 0.25, {-1.8532018100620586}},
    {"mass_defect", {0.81, 1.3}, 0.6, {-1.3112641130866296}},
    {"mass_defect", {0.5, 1.0}, 0.1, {0}},
    {"pressure_defect", {0.3, 0.7}, 0.25, {5.914330331099019}},
    {"pressure_defect", {0.81, 1.3}, 0.6, {-4.5923940153294218}},
    {"pressure_defect", {0.5, 1.0}, 0.1, {-0.90483741803595963}},
    {"slip_defect", {0.3, 0.7}, 0.25, {-1.3909886451950089}},
    {"slip_defect", {0.81, 1.3}, 0.6, {1.1122717484664217}},
    {"slip_defect", {0.5, 1.0}, 0.1, {-3.7474680032308867}},
};

fpsi::PhysicalParams frozen_params() {
  fpsi::PhysicalParams p;
  p.rho_f = 1.3;
  p.nu_f = 0.7;
  p.rho_p = 0.9;
  p.nu_p = 1.2;
  p.lambda = 1.7;
  p.alpha = 0.8;
  p.s0 = 0.5;
  p.kappa = 0.3;
  p.beta = 2.0;
  return p;
}

std::vector<double> evaluate(const fpsi::ProblemData& d, const std::string& name, Vec2 x, double t) {
  const std::map<std::string, fpsi::VectorTimeFn> vec = {{"fluid_force", d.fluid_force},
                                                         {"solid_force", d.solid_force},
                                                         {"fluid_traction", d.fluid_traction},
                                                         {"solid_traction", d.solid_traction},
                                                         {"stress_jump", d.stress_jump}};
  const std::map<std::string, fpsi::ScalarTimeFn> sca = {{"pressure_source", d.pressure_source},
                                                         {"pressure_flux", d.pressure_flux},
                                                         {"mass_defect", d.mass_defect},
                                                         {"pressure_defect", d.pressure_defect},
                                                         {"slip_defect", d.slip_defect}};
  if (auto it = vec.find(name); it != vec.end()) {
    const Vec2 v = it->second(x, t);
    return {v.x, v.y};
  }
  return {sca.at(name)(x, t)};
}

TEST(Manufactured, TrigDataMatchesSymbolicDerivation) {
  const auto mc = fpsi::manufactured_case("trig", frozen_params());
  for (const auto& f : kFrozen) {
    const auto got = evaluate(mc.data, f.name, f.x, f.t);
    ASSERT_EQ(got.size(), f.values.size()) << f.name;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_NEAR(got[i], f.values[i], 1e-10 * std::max(1.0, std::abs(f.values[i]))) << f.name;
    }
  }
}

TEST(Manufactured, PolyCase) {
  auto p = frozen_params();
  const auto mc = fpsi::manufactured_case("poly", p);
  for (Vec2 x : {Vec2{0.2, 0.3}, Vec2{0.9, 0.1}}) {
    const Vec2 f = mc.data.fluid_force(x, 0.5);
    EXPECT_DOUBLE_EQ(f.x, -2.0 * p.nu_f);
    EXPECT_DOUBLE_EQ(f.y, 0.0);
    EXPECT_EQ(mc.data.pressure_defect(Vec2{x.x, 1.0}, 0.5), 0.0);
  }
}

TEST(Manufactured, InitialDataIsTimeZero) {
  for (const auto& id : fpsi::manufactured_case_ids()) {
    const auto mc = fpsi::manufactured_case(id);
    for (Vec2 x : {Vec2{0.25, 0.4}, Vec2{0.6, 1.7}}) {
      EXPECT_EQ(mc.data.initial.u(x), mc.u(x, 0.0));
      EXPECT_EQ(mc.data.initial.eta(x), mc.eta(x, 0.0));
      EXPECT_EQ(mc.data.initial.eta_dot(x), mc.eta_t(x, 0.0));
      EXPECT_EQ(mc.data.initial.p_p(x), mc.p_p(x, 0.0));
    }
  }
  try {
    fpsi::manufactured_case("nope");
    FAIL();
  } catch (const fpsi::Error& e) {
    EXPECT_EQ(e.kind(), fpsi::ErrorKind::UnknownCase);
  }
}

TEST(Convergence, PolynomialInterpolationIsExact) {
  fpsi::StudyOptions opt;
  opt.base_cells = 1;
  opt.solve = false;
  const auto table = fpsi::convergence_study(fpsi::manufactured_case("poly"), 3, opt);
  for (const auto& row : table.rows) {
    EXPECT_LE(row.err.u_L2, 1e-13);
    EXPECT_LE(row.err.u_H1, 1e-12);
    EXPECT_LE(row.err.g2_L2, 1e-13);
    EXPECT_EQ(row.err.eta_L2, 0.0);
  }
}

TEST(Convergence, InterpolationRates) {
  fpsi::StudyOptions opt;
  opt.base_cells = 4;
  opt.solve = false;
  const auto table = fpsi::convergence_study(fpsi::manufactured_case("trig"), 3, opt);
  const auto& last = table.rows.back().rate;
  EXPECT_NEAR(last.u_L2, 3.0, 0.2);
  EXPECT_NEAR(last.eta_L2, 3.0, 0.2);
  EXPECT_NEAR(last.pp_L2, 2.0, 0.2);
  EXPECT_NEAR(last.pf_L2, 2.0, 0.2);
  EXPECT_THROW(fpsi::convergence_study(fpsi::manufactured_case("trig"), 2, opt), fpsi::Error);
}

TEST(Convergence, SolvedTrigCase) {
  fpsi::StudyOptions opt;
  opt.base_cells = 2;
  const auto table = fpsi::convergence_study(fpsi::manufactured_case("trig"), 3, opt);
  for (const auto& row : table.rows) {
    std::printf("h=%g u=%.3e pf=%.3e eta=%.3e pp=%.3e g1=%.3e g2=%.3e lam=%.3e\n", row.h, row.err.u_L2,
                row.err.pf_L2, row.err.eta_L2, row.err.pp_L2, row.err.g1_L2, row.err.g2_L2, row.err.lambda_L2);
  }
  const auto& last = table.rows.back().rate;
  EXPECT_GE(last.u_L2, 1.7);
  EXPECT_GE(last.eta_L2, 1.7);
  EXPECT_GE(last.pp_L2, 1.7);
}

TEST(Oracle, Identity) {
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, -1.0, 3.0);
  EXPECT_EQ(fpsi::oracle_dense_solve(Eigen::MatrixXd::Identity(5, 5), b), b);
  EXPECT_THROW(fpsi::oracle_dense_solve(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Ones(2)), fpsi::Error);
}

TEST(Oracle, Permutation) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  Eigen::MatrixXd A(6, 6);
  for (int i = 0; i < 36; ++i) A.data()[i] = U(rng);
  A += 6.0 * Eigen::MatrixXd::Identity(6, 6);
  Eigen::VectorXd b(6);
  for (int i = 0; i < 6; ++i) b[i] = U(rng);
  const std::vector<int> perm = {3, 0, 5, 1, 4, 2};
  Eigen::MatrixXd PA(6, 6);
  Eigen::VectorXd Pb(6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) PA(i, j) = A(perm[i], perm[j]);
    Pb[i] = b[perm[i]];
  }
  const auto x = fpsi::oracle_dense_solve(A, b);
  const auto y = fpsi::oracle_dense_solve(PA, Pb);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(y[i], x[perm[i]], 1e-13);
}

TEST(Oracle, MatchesSparseSolver) {
  const auto spaces = std::make_shared<const fpsi::DiscreteSpaces>(fpsi::build_spaces(fpsi::standard_geometry(1)));
  const auto mc = fpsi::manufactured_case("trig");
  const double dt = 0.1;
  const auto stepper = fpsi::make_stepper(spaces, mc.params, dt);
  const auto st0 = fpsi::init_state(*spaces, mc.data.initial, dt);
  const auto st1 = fpsi::step(stepper, st0, fpsi::loads_at(mc.data, stepper.system, dt));
  const auto x = fpsi::oracle_dense_solve(stepper.system, st1.rhs);
  EXPECT_LE((x - st1.scaled).norm(), 1e-9 * x.norm());
}

}  // namespace
