#include "fpsi/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fpsi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kErrorOrder = 6;

Mat2 symmetric_part_twice(const Mat2& g) {
  return {{{2.0 * g[0][0], g[0][1] + g[1][0]}, {g[0][1] + g[1][0], 2.0 * g[1][1]}}};
}

Mat2 fluid_stress(const ManufacturedCase& mc, Vec2 x, double t) {
  const auto& p = mc.params;
  Mat2 s = symmetric_part_twice(mc.grad_u(x, t));
  const double pf = mc.p_f(x, t);
  for (auto& row : s) {
    for (double& v : row) v *= p.nu_f;
  }
  s[0][0] -= pf;
  s[1][1] -= pf;
  return s;
}

Mat2 solid_stress(const ManufacturedCase& mc, Vec2 x, double t) {
  const auto& p = mc.params;
  const Mat2 g = mc.grad_eta(x, t);
  Mat2 s = symmetric_part_twice(g);
  for (auto& row : s) {
    for (double& v : row) v *= p.nu_p;
  }
  const double iso = p.lambda * (g[0][0] + g[1][1]) - p.alpha * mc.p_p(x, t);
  s[0][0] += iso;
  s[1][1] += iso;
  return s;
}

Vec2 stress_times(const Mat2& s, Vec2 n) { return {s[0][0] * n.x + s[0][1] * n.y, s[1][0] * n.x + s[1][1] * n.y}; }

// Boundary data and interface defects on the standard geometry: the fluid
// Neumann side is y = 0, the poroelastic one is y = 2 and the interface is y = 1.
void complete_case(ManufacturedCase& mc) {
  const Vec2 n_f{0.0, 1.0};
  const Vec2 n_p{0.0, -1.0};
  const Vec2 tau{1.0, 0.0};
  auto& d = mc.data;
  // Copies keep the closures valid after the case is moved.
  const auto stress_f = [c = mc](Vec2 x, double t) { return fluid_stress(c, x, t); };
  const auto stress_p = [c = mc](Vec2 x, double t) { return solid_stress(c, x, t); };
  mc.g1 = [stress_f, n_f](Vec2 x, double t) { return dot(stress_times(stress_f(x, t), n_f), n_f); };
  mc.g2 = [stress_f, n_f, tau](Vec2 x, double t) { return dot(stress_times(stress_f(x, t), n_f), tau); };
  const auto grad_p = mc.grad_p_p;
  const double kappa = mc.params.kappa;
  const double beta = mc.params.beta;
  mc.lambda = [grad_p, kappa, n_p](Vec2 x, double t) { return kappa * dot(grad_p(x, t), n_p); };

  d.fluid_traction = [stress_f](Vec2 x, double t) { return stress_times(stress_f(x, t), Vec2{0.0, -1.0}); };
  d.solid_traction = [stress_p](Vec2 x, double t) { return stress_times(stress_p(x, t), Vec2{0.0, 1.0}); };
  d.pressure_flux = [grad_p, kappa](Vec2 x, double t) { return kappa * grad_p(x, t).y; };
  d.stress_jump = [stress_f, stress_p, n_f, n_p](Vec2 x, double t) {
    return stress_times(stress_f(x, t), n_f) + stress_times(stress_p(x, t), n_p);
  };
  const auto u = mc.u;
  const auto eta_t = mc.eta_t;
  const auto lambda = mc.lambda;
  const auto g1 = mc.g1;
  const auto g2 = mc.g2;
  const auto p_p = mc.p_p;
  d.mass_defect = [u, eta_t, lambda, n_f, n_p](Vec2 x, double t) {
    return dot(u(x, t), n_f) + dot(eta_t(x, t), n_p) - lambda(x, t);
  };
  d.pressure_defect = [g1, p_p](Vec2 x, double t) { return g1(x, t) + p_p(x, t); };
  d.slip_defect = [g2, u, eta_t, beta, tau](Vec2 x, double t) {
    return (g2(x, t) + beta * dot(u(x, t) - eta_t(x, t), tau)) / beta;
  };
  const double eps_bar = mc.params.eps_bar;
  d.lambda_shift = [lambda, eps_bar](const BlockSystem& sys, double t) -> Eigen::VectorXd {
    const Eigen::VectorXd nodal = interpolate(sys.spaces->lambda, ScalarFn([&](Vec2 x) { return lambda(x, t); }));
    return eps_bar * (sys.S_lambda * nodal);
  };

  d.initial.u = [u](Vec2 x) { return u(x, 0.0); };
  d.initial.eta = [e = mc.eta](Vec2 x) { return e(x, 0.0); };
  d.initial.eta_dot = [eta_t](Vec2 x) { return eta_t(x, 0.0); };
  d.initial.p_p = [p_p](Vec2 x) { return p_p(x, 0.0); };
}

ManufacturedCase trig_case(const PhysicalParams& p) {
  ManufacturedCase mc;
  mc.id = "trig";
  mc.params = p;
  const auto g = [](double t) { return std::exp(-t); };
  mc.u = [g](Vec2 x, double t) {
    const double s = std::sin(kPi * x.x);
    return g(t) * Vec2{kPi * s * s * std::cos(kPi * x.y), -kPi * std::sin(2 * kPi * x.x) * std::sin(kPi * x.y)};
  };
  mc.grad_u = [g](Vec2 x, double t) {
    const double s = std::sin(kPi * x.x), s2 = std::sin(2 * kPi * x.x), c2 = std::cos(2 * kPi * x.x);
    const double cy = std::cos(kPi * x.y), sy = std::sin(kPi * x.y), k = g(t) * kPi * kPi;
    return Mat2{{{k * s2 * cy, -k * s * s * sy}, {-2 * k * c2 * sy, -k * s2 * cy}}};
  };
  mc.p_f = [g](Vec2 x, double t) { return g(t) * std::cos(kPi * x.x) * std::cos(kPi * x.y); };
  mc.eta = [g](Vec2 x, double t) {
    const double s = std::sin(kPi * x.x);
    return g(t) * Vec2{s * std::cos(kPi * x.y), s * std::sin(kPi * x.y)};
  };
  mc.eta_t = [eta = mc.eta](Vec2 x, double t) { return -eta(x, t); };
  mc.grad_eta = [g](Vec2 x, double t) {
    const double s = std::sin(kPi * x.x), c = std::cos(kPi * x.x);
    const double cy = std::cos(kPi * x.y), sy = std::sin(kPi * x.y), k = g(t) * kPi;
    return Mat2{{{k * c * cy, -k * s * sy}, {k * c * sy, k * s * cy}}};
  };
  mc.p_p = [g](Vec2 x, double t) { return g(t) * std::sin(kPi * x.x) * std::cos(kPi * x.y); };
  mc.grad_p_p = [g](Vec2 x, double t) {
    return g(t) * kPi * Vec2{std::cos(kPi * x.x) * std::cos(kPi * x.y), -std::sin(kPi * x.x) * std::sin(kPi * x.y)};
  };

  mc.data.fluid_force = [p, g, u = mc.u](Vec2 x, double t) {
    const double s = std::sin(kPi * x.x), c = std::cos(kPi * x.x);
    const double cy = std::cos(kPi * x.y), sy = std::sin(kPi * x.y);
    const double pi3 = kPi * kPi * kPi;
    const Vec2 lap = g(t) * pi3 * Vec2{cy * (2 * std::cos(2 * kPi * x.x) - s * s), 5 * std::sin(2 * kPi * x.x) * sy};
    const Vec2 grad_pf = -g(t) * kPi * Vec2{s * cy, c * sy};
    return -p.rho_f * u(x, t) - p.nu_f * lap + grad_pf;
  };
  mc.data.solid_force = [p, g, eta = mc.eta, grad_p = mc.grad_p_p](Vec2 x, double t) {
    const double s = std::sin(kPi * x.x), c = std::cos(kPi * x.x);
    const double cy = std::cos(kPi * x.y), sy = std::sin(kPi * x.y);
    const Vec2 e = eta(x, t);
    const Vec2 lap = -2 * kPi * kPi * e;
    const Vec2 grad_div = kPi * kPi * g(t) * Vec2{cy * (c - s), -sy * (c + s)};
    return p.rho_p * e - p.nu_p * (lap + grad_div) - p.lambda * grad_div + p.alpha * grad_p(x, t);
  };
  mc.data.pressure_source = [p, g, pp = mc.p_p](Vec2 x, double t) {
    const double div_eta = kPi * g(t) * std::cos(kPi * x.y) * (std::cos(kPi * x.x) + std::sin(kPi * x.x));
    return -p.s0 * pp(x, t) - p.alpha * div_eta + 2 * kPi * kPi * p.kappa * pp(x, t);
  };
  complete_case(mc);
  return mc;
}

ManufacturedCase poly_case(const PhysicalParams& p) {
  ManufacturedCase mc;
  mc.id = "poly";
  mc.params = p;
  const auto zero_vec = [](Vec2, double) { return Vec2{}; };
  const auto zero = [](Vec2, double) { return 0.0; };
  const auto zero_mat = [](Vec2, double) { return Mat2{}; };
  mc.u = [](Vec2 x, double) { return Vec2{x.y * x.y, 0.0}; };
  mc.grad_u = [](Vec2 x, double) { return Mat2{{{0.0, 2 * x.y}, {0.0, 0.0}}}; };
  mc.p_f = zero;
  mc.eta = mc.eta_t = zero_vec;
  mc.grad_eta = zero_mat;
  mc.p_p = zero;
  mc.grad_p_p = zero_vec;
  mc.data.fluid_force = [p](Vec2, double) { return Vec2{-2.0 * p.nu_f, 0.0}; };
  mc.data.solid_force = zero_vec;
  mc.data.pressure_source = zero;
  complete_case(mc);
  return mc;
}

double l2_error(const FunctionSpace& sp, const Eigen::VectorXd& coeffs, const ScalarFn& exact) {
  const auto q = quadrature_rule(sp.cell, kErrorOrder);
  double sum = 0.0;
  for (int c = 0; c < sp.cells(); ++c) {
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const double e = evaluate_scalar(sp, coeffs, c, q.points[k]) - exact(sp.map_to_physical(c, q.points[k]));
      sum += q.weights[k] * sp.jacobian(c) * e * e;
    }
  }
  return std::sqrt(sum);
}

double l2_error(const FunctionSpace& sp, const Eigen::VectorXd& coeffs, const VectorFn& exact) {
  const auto q = quadrature_rule(sp.cell, kErrorOrder);
  double sum = 0.0;
  for (int c = 0; c < sp.cells(); ++c) {
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Vec2 e = evaluate_vector(sp, coeffs, c, q.points[k]) - exact(sp.map_to_physical(c, q.points[k]));
      sum += q.weights[k] * sp.jacobian(c) * dot(e, e);
    }
  }
  return std::sqrt(sum);
}

double h1_error(const FunctionSpace& sp, const Eigen::VectorXd& coeffs, const std::function<Mat2(Vec2)>& exact) {
  const auto q = quadrature_rule(sp.cell, kErrorOrder);
  double sum = 0.0;
  for (int c = 0; c < sp.cells(); ++c) {
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Mat2 a = evaluate_vector_gradient(sp, coeffs, c, q.points[k]);
      const Mat2 b = exact(sp.map_to_physical(c, q.points[k]));
      double e = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) e += (a[i][j] - b[i][j]) * (a[i][j] - b[i][j]);
      }
      sum += q.weights[k] * sp.jacobian(c) * e;
    }
  }
  return std::sqrt(sum);
}

double h1_error(const FunctionSpace& sp, const Eigen::VectorXd& coeffs, const VectorFn& exact_gradient) {
  const auto q = quadrature_rule(sp.cell, kErrorOrder);
  double sum = 0.0;
  for (int c = 0; c < sp.cells(); ++c) {
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Vec2 e = evaluate_scalar_gradient(sp, coeffs, c, q.points[k]) -
                     exact_gradient(sp.map_to_physical(c, q.points[k]));
      sum += q.weights[k] * sp.jacobian(c) * dot(e, e);
    }
  }
  return std::sqrt(sum);
}

double rate(double coarse, double fine, double h_coarse, double h_fine) {
  if (coarse <= 0.0 || fine <= 0.0) return 0.0;
  return std::log(coarse / fine) / std::log(h_coarse / h_fine);
}

State interpolated_state(const DiscreteSpaces& s, const ManufacturedCase& mc, double t) {
  State st;
  st.t = t;
  st.u = interpolate(s.velocity, VectorFn([&](Vec2 x) { return mc.u(x, t); }));
  st.p_f = interpolate(s.fluid_pressure, ScalarFn([&](Vec2 x) { return mc.p_f(x, t); }));
  st.eta = interpolate(s.displacement, VectorFn([&](Vec2 x) { return mc.eta(x, t); }));
  st.p_p = interpolate(s.pore_pressure, ScalarFn([&](Vec2 x) { return mc.p_p(x, t); }));
  st.g1 = interpolate(s.g1, ScalarFn([&](Vec2 x) { return mc.g1(x, t); }));
  st.g2 = interpolate(s.g2, ScalarFn([&](Vec2 x) { return mc.g2(x, t); }));
  st.lambda = interpolate(s.lambda, ScalarFn([&](Vec2 x) { return mc.lambda(x, t); }));
  return st;
}

}  // namespace

std::vector<std::string> manufactured_case_ids() { return {"trig", "poly"}; }

ManufacturedCase manufactured_case(const std::string& id, const PhysicalParams& params) {
  params.validate();
  if (id == "trig") return trig_case(params);
  if (id == "poly") return poly_case(params);
  throw Error(ErrorKind::UnknownCase, "no manufactured case named '" + id + "'");
}

FieldErrors field_errors(const DiscreteSpaces& s, const State& st, const ManufacturedCase& mc, double t) {
  FieldErrors e;
  e.u_L2 = l2_error(s.velocity, st.u, VectorFn([&](Vec2 x) { return mc.u(x, t); }));
  e.u_H1 = h1_error(s.velocity, st.u, std::function<Mat2(Vec2)>([&](Vec2 x) { return mc.grad_u(x, t); }));
  e.pf_L2 = l2_error(s.fluid_pressure, st.p_f, ScalarFn([&](Vec2 x) { return mc.p_f(x, t); }));
  e.eta_L2 = l2_error(s.displacement, st.eta, VectorFn([&](Vec2 x) { return mc.eta(x, t); }));
  e.eta_H1 = h1_error(s.displacement, st.eta, std::function<Mat2(Vec2)>([&](Vec2 x) { return mc.grad_eta(x, t); }));
  e.pp_L2 = l2_error(s.pore_pressure, st.p_p, ScalarFn([&](Vec2 x) { return mc.p_p(x, t); }));
  e.pp_H1 = h1_error(s.pore_pressure, st.p_p, VectorFn([&](Vec2 x) { return mc.grad_p_p(x, t); }));
  e.g1_L2 = l2_error(s.g1, st.g1, ScalarFn([&](Vec2 x) { return mc.g1(x, t); }));
  e.g2_L2 = l2_error(s.g2, st.g2, ScalarFn([&](Vec2 x) { return mc.g2(x, t); }));
  e.lambda_L2 = l2_error(s.lambda, st.lambda, ScalarFn([&](Vec2 x) { return mc.lambda(x, t); }));
  return e;
}

ConvergenceTable convergence_study(const ManufacturedCase& mc, int levels, const StudyOptions& opt) {
  if (levels < 3) throw Error(ErrorKind::BadValue, "a convergence study needs at least three levels");
  if (opt.base_cells < 1) throw Error(ErrorKind::ZeroCells, "base level needs at least one cell");
  if (!(opt.final_time > 0.0) || !(opt.dt_factor > 0.0)) {
    throw Error(ErrorKind::NonPositiveParam, "final time and dt factor must be positive");
  }
  ConvergenceTable table;
  for (int l = 0; l < levels; ++l) {
    const int n = opt.base_cells << l;
    ConvergenceRow row;
    row.level = l;
    row.h = 1.0 / n;
    const int steps = std::max(1, static_cast<int>(std::lround(opt.final_time / (opt.dt_factor * row.h * row.h))));
    row.dt = opt.final_time / steps;
    if (opt.solve) {
      RunConfig cfg;
      cfg.params = mc.params;
      cfg.dt = row.dt;
      cfg.n_steps = steps;
      cfg.nx = cfg.ny = n;
      const auto res = run(cfg, mc.data);
      row.err = field_errors(*res.spaces, res.trajectory.back(), mc, res.trajectory.back().t);
    } else {
      const auto spaces = build_spaces(standard_geometry(n));
      row.err = field_errors(spaces, interpolated_state(spaces, mc, opt.final_time), mc, opt.final_time);
    }
    if (l > 0) {
      const auto& prev = table.rows.back();
      const auto r = [&](double FieldErrors::*m) { return rate(prev.err.*m, row.err.*m, prev.h, row.h); };
      auto& q = row.rate;
      q.u_L2 = r(&FieldErrors::u_L2);
      q.u_H1 = r(&FieldErrors::u_H1);
      q.pf_L2 = r(&FieldErrors::pf_L2);
      q.eta_L2 = r(&FieldErrors::eta_L2);
      q.eta_H1 = r(&FieldErrors::eta_H1);
      q.pp_L2 = r(&FieldErrors::pp_L2);
      q.pp_H1 = r(&FieldErrors::pp_H1);
      q.g1_L2 = r(&FieldErrors::g1_L2);
      q.g2_L2 = r(&FieldErrors::g2_L2);
      q.lambda_L2 = r(&FieldErrors::lambda_L2);
    }
    table.rows.push_back(row);
  }
  return table;
}

Eigen::VectorXd oracle_dense_solve(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || b.size() != n) throw Error(ErrorKind::DimensionMismatch, "dense oracle needs a square system");
  const double scale = n > 0 ? a.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    }
    if (!(std::abs(a(piv, k)) > 1e-14 * scale)) throw Error(ErrorKind::Singular, "dense oracle met a zero pivot");
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Eigen::VectorXd x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

Eigen::VectorXd oracle_dense_solve(const BlockSystem& system, const Eigen::VectorXd& rhs) {
  if (system.dim() > 1500) throw Error(ErrorKind::DimensionMismatch, "dense oracle is limited to 1500 unknowns");
  return oracle_dense_solve(Eigen::MatrixXd(full_matrix(system)), rhs);
}

}  // namespace fpsi
