#include "fpsi/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace fpsi {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, int line, const std::string& why) {
  throw Error(ErrorKind::BadValue, key + " (line " + std::to_string(line) + "): " + why);
}

double parse_double(const std::string& key, const std::string& text, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) bad(key, line, "'" + text + "' is not a finite number");
  return v;
}

int parse_int(const std::string& key, const std::string& text, int line) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) bad(key, line, "'" + text + "' is not an integer");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text, int line) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  bad(key, line, "'" + text + "' is not a boolean");
}

Rect parse_rect(const std::string& key, const std::string& text, int line) {
  std::istringstream in(text);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) v.push_back(parse_double(key, tok, line));
  if (v.size() != 4) bad(key, line, "expected four numbers x0 y0 x1 y1");
  if (!(v[2] > v[0]) || !(v[3] > v[1])) bad(key, line, "rectangle corners are not ordered");
  return {v[0], v[1], v[2], v[3]};
}

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

std::vector<double> vertex_values(const FunctionSpace& sp, const Eigen::VectorXd& coeffs, int n_vertices) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_vertices) * sp.components);
  for (int i = 0; i < n_vertices; ++i) {
    for (int c = 0; c < sp.components; ++c) out.push_back(coeffs[sp.dof(c, i)]);
  }
  return out;
}

}  // namespace

RunConfig Config::run_config() const {
  RunConfig rc;
  rc.params = params;
  rc.dt = dt;
  rc.n_steps = n_steps;
  rc.fluid = fluid;
  rc.poro = poro;
  rc.nx = nx;
  rc.ny = ny;
  rc.allow_zero_eps_bar = eps_bar_zero_override;
  return rc;
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::map<std::string, int> seen;
  auto positive = [](double& slot) {
    return [&slot](const std::string& k, const std::string& v, int line) {
      slot = parse_double(k, v, line);
      if (!(slot > 0.0)) bad(k, line, "must be positive");
    };
  };
  const std::map<std::string, std::function<void(const std::string&, const std::string&, int)>> handlers = {
      {"fluid_rect", [&](auto& k, auto& v, int l) { cfg.fluid = parse_rect(k, v, l); }},
      {"poro_rect", [&](auto& k, auto& v, int l) { cfg.poro = parse_rect(k, v, l); }},
      {"nx", [&](auto& k, auto& v, int l) {
         cfg.nx = parse_int(k, v, l);
         if (cfg.nx < 1) bad(k, l, "must be at least 1");
       }},
      {"ny", [&](auto& k, auto& v, int l) {
         cfg.ny = parse_int(k, v, l);
         if (cfg.ny < 1) bad(k, l, "must be at least 1");
       }},
      {"dt", positive(cfg.dt)},
      {"n_steps", [&](auto& k, auto& v, int l) {
         cfg.n_steps = parse_int(k, v, l);
         if (cfg.n_steps < 1) bad(k, l, "must be at least 1");
       }},
      {"rho_f", positive(cfg.params.rho_f)},
      {"nu_f", positive(cfg.params.nu_f)},
      {"rho_p", positive(cfg.params.rho_p)},
      {"nu_p", positive(cfg.params.nu_p)},
      {"lambda", positive(cfg.params.lambda)},
      {"alpha", positive(cfg.params.alpha)},
      {"s0", positive(cfg.params.s0)},
      {"kappa", positive(cfg.params.kappa)},
      {"beta", positive(cfg.params.beta)},
      {"eps_bar", [&](auto& k, auto& v, int l) {
         cfg.params.eps_bar = parse_double(k, v, l);
         if (cfg.params.eps_bar < 0.0) bad(k, l, "must not be negative");
       }},
      {"C_T", positive(cfg.domain.C_T)},
      {"C_K", positive(cfg.domain.C_K)},
      {"C_P", positive(cfg.domain.C_P)},
      {"beta2", positive(cfg.beta2)},
      {"case", [&](auto& k, auto& v, int l) {
         const auto ids = manufactured_case_ids();
         if (v != "none" && std::find(ids.begin(), ids.end(), v) == ids.end()) bad(k, l, "unknown case '" + v + "'");
         cfg.case_id = v;
       }},
      {"initial", [&](auto& k, auto& v, int l) {
         if (v != "zero" && v != "smooth" && v != "random") bad(k, l, "expected zero, smooth or random");
         cfg.initial = v;
       }},
      {"seed", [&](auto& k, auto& v, int l) {
         const int s = parse_int(k, v, l);
         if (s < 0) bad(k, l, "must not be negative");
         cfg.seed = static_cast<unsigned>(s);
       }},
      {"levels", [&](auto& k, auto& v, int l) {
         cfg.levels = parse_int(k, v, l);
         if (cfg.levels < 1) bad(k, l, "must be at least 1");
       }},
      {"output_dir", [&](auto&, auto& v, int) { cfg.output_dir = v; }},
      {"emit_vtk", [&](auto& k, auto& v, int l) { cfg.emit_vtk = parse_bool(k, v, l); }},
      {"emit_matrices", [&](auto& k, auto& v, int l) { cfg.emit_matrices = parse_bool(k, v, l); }},
      {"eps_bar_zero_override", [&](auto& k, auto& v, int l) { cfg.eps_bar_zero_override = parse_bool(k, v, l); }},
  };

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(std::string_view(raw).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) bad(body, line, "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = handlers.find(key);
    if (it == handlers.end()) {
      cfg.warnings.push_back("line " + std::to_string(line) + ": unknown key '" + key + "' ignored");
      continue;
    }
    if (value.empty()) bad(key, line, "missing value");
    it->second(key, value, line);
    seen[key] = line;
  }
  for (const char* key : {"fluid_rect", "poro_rect", "nx", "ny", "dt", "n_steps"}) {
    if (!seen.count(key)) throw Error(ErrorKind::MissingKey, key);
  }
  if (cfg.params.eps_bar == 0.0 && !cfg.eps_bar_zero_override) {
    bad("eps_bar", seen.count("eps_bar") ? seen["eps_bar"] : 0, "zero requires eps_bar_zero_override = true");
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ProblemData unforced_problem(const std::string& initial) {
  ProblemData d;
  if (initial == "smooth") {
    constexpr double pi = std::numbers::pi;
    d.initial.u = [](Vec2 x) { return Vec2{std::sin(pi * x.x), 0.0}; };
    d.initial.eta = [](Vec2 x) { return Vec2{0.0, 0.1 * std::sin(pi * x.x)}; };
    d.initial.eta_dot = [](Vec2) { return Vec2{}; };
    d.initial.p_p = [](Vec2 x) { return std::sin(pi * x.x); };
  } else {
    d.initial.u = d.initial.eta = d.initial.eta_dot = [](Vec2) { return Vec2{}; };
    d.initial.p_p = [](Vec2) { return 0.0; };
  }
  return d;
}

void write_vtk(std::ostream& out, const std::vector<Vec2>& points, const std::vector<std::array<int, 3>>& triangles,
               const std::vector<VtkField>& fields, const std::string& title) {
  const std::size_t np = points.size(), nc = triangles.size();
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << np << " double\n";
  for (const auto& p : points) {
    put(out, p.x);
    out << ' ';
    put(out, p.y);
    out << " 0\n";
  }
  out << "CELLS " << nc << ' ' << 4 * nc << '\n';
  for (const auto& t : triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << nc << '\n';
  for (std::size_t i = 0; i < nc; ++i) out << "5\n";
  if (fields.empty()) return;
  out << "POINT_DATA " << np << '\n';
  for (const auto& f : fields) {
    if (f.values.size() != np * static_cast<std::size_t>(f.components) || (f.components != 1 && f.components != 2)) {
      throw Error(ErrorKind::DimensionMismatch, "field '" + f.name + "' does not match the point count");
    }
    if (f.components == 1) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) {
        put(out, v);
        out << '\n';
      }
    } else {
      out << "VECTORS " << f.name << " double\n";
      for (std::size_t i = 0; i < np; ++i) {
        put(out, f.values[2 * i]);
        out << ' ';
        put(out, f.values[2 * i + 1]);
        out << " 0\n";
      }
    }
  }
}

void write_vtk(const std::string& path, const std::vector<Vec2>& points,
               const std::vector<std::array<int, 3>>& triangles, const std::vector<VtkField>& fields) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  write_vtk(out, points, triangles, fields);
  if (!out) throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
}

void write_state_vtk(const std::string& prefix, const DiscreteSpaces& s, const State& st) {
  const auto& mf = *s.geometry.fluid;
  const auto& mp = *s.geometry.poro;
  const int nf = static_cast<int>(mf.vertices.size()), np = static_cast<int>(mp.vertices.size());
  write_vtk(prefix + "_fluid.vtk", mf.vertices, mf.triangles,
            {{"velocity", 2, vertex_values(s.velocity, st.u, nf)},
             {"fluid_pressure", 1, vertex_values(s.fluid_pressure, st.p_f, nf)}});
  write_vtk(prefix + "_poro.vtk", mp.vertices, mp.triangles,
            {{"displacement", 2, vertex_values(s.displacement, st.eta, np)},
             {"pore_pressure", 1, vertex_values(s.pore_pressure, st.p_p, np)}});
}

void write_energy_csv(std::ostream& out, const std::vector<EnergyReport>& rows) {
  out << "n,t,E,diss_eta_dd,diss_u_d,diss_pp_d,diss_eta_E,diss_Du,diss_gradpp,diss_g2,diss_lambda,identity_residual\n";
  for (const auto& r : rows) {
    out << r.n;
    for (double v : {r.t, r.E, r.diss_eta_dd, r.diss_u_d, r.diss_pp_d, r.diss_eta_E, r.diss_Du, r.diss_gradpp,
                     r.diss_g2, r.diss_lambda, r.identity_residual}) {
      out << ',';
      put(out, v);
    }
    out << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "level,h,dt,err_u_L2,err_u_H1,err_pf_L2,err_eta_L2,err_eta_H1,err_pp_L2,err_pp_H1,"
         "rate_u_L2,rate_u_H1,rate_pf_L2,rate_eta_L2,rate_eta_H1,rate_pp_L2,rate_pp_H1,"
         "err_g1_L2,err_g2_L2,err_lambda_L2\n";
  for (const auto& r : table.rows) {
    const auto& e = r.err;
    const auto& q = r.rate;
    out << r.level;
    for (double v : {r.h, r.dt, e.u_L2, e.u_H1, e.pf_L2, e.eta_L2, e.eta_H1, e.pp_L2, e.pp_H1, q.u_L2, q.u_H1, q.pf_L2,
                     q.eta_L2, q.eta_H1, q.pp_L2, q.pp_H1, e.g1_L2, e.g2_L2, e.lambda_L2}) {
      out << ',';
      put(out, v);
    }
    out << '\n';
  }
}

}  // namespace fpsi
