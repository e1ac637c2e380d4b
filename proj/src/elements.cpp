#include "fpsi/elements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fpsi {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::UnsupportedOrder, "Gauss rule needs at least one point");
  QuadratureRule rule;
  rule.order = 2 * n - 1;
  rule.points.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[static_cast<std::size_t>(i)] = {0.5 * (1.0 - x), 0.0};
    rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
  }
  std::reverse(rule.points.begin(), rule.points.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

QuadratureRule quadrature_rule(CellType cell, int order) {
  if (order < 0) throw Error(ErrorKind::UnsupportedOrder, "negative quadrature order");
  if (cell == CellType::Segment) {
    auto rule = gauss_legendre(std::max(1, (order + 2) / 2));
    return rule;
  }
  if (order > 6) throw Error(ErrorKind::UnsupportedOrder, "triangle rules go up to order 6");
  QuadratureRule rule;
  rule.order = order;
  if (order <= 1) {
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
    return rule;
  }
  if (order == 2) {
    rule.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
  }
  // Collapsed (Duffy) tensor Gauss rule: x = u, y = (1 - u) v, dxdy = (1 - u) du dv.
  const int n = (order + 3) / 2;
  const auto g = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = g.points[static_cast<std::size_t>(i)].x;
      const double v = g.points[static_cast<std::size_t>(j)].x;
      rule.points.push_back({u, (1.0 - u) * v});
      rule.weights.push_back(g.weights[static_cast<std::size_t>(i)] *
                             g.weights[static_cast<std::size_t>(j)] * (1.0 - u));
    }
  }
  return rule;
}

int scalar_basis_count(CellType cell, int degree) {
  if (degree < 0 || degree > 2) throw Error(ErrorKind::UnsupportedDegree, "degree must be 0, 1 or 2");
  if (cell == CellType::Segment) return degree + 1;
  return degree == 0 ? 1 : (degree == 1 ? 3 : 6);
}

BasisEval reference_basis(CellType cell, int degree, int components, Vec2 p) {
  const int n = scalar_basis_count(cell, degree);
  if (components < 1 || components > 2) {
    throw Error(ErrorKind::UnsupportedDegree, "components must be 1 or 2");
  }
  BasisEval out;
  out.components = components;
  out.values.resize(static_cast<std::size_t>(n));
  out.gradients.resize(static_cast<std::size_t>(n));
  if (degree == 0) {
    out.values[0] = 1.0;
    out.gradients[0] = {0.0, 0.0};
    return out;
  }
  if (cell == CellType::Segment) {
    const double s = p.x;
    if (degree == 1) {
      out.values = {1.0 - s, s};
      out.gradients = {{-1.0, 0.0}, {1.0, 0.0}};
    } else {
      out.values = {(1.0 - s) * (1.0 - 2.0 * s), s * (2.0 * s - 1.0), 4.0 * s * (1.0 - s)};
      out.gradients = {{4.0 * s - 3.0, 0.0}, {4.0 * s - 1.0, 0.0}, {4.0 - 8.0 * s, 0.0}};
    }
    return out;
  }
  const std::array<double, 3> l = {1.0 - p.x - p.y, p.x, p.y};
  const std::array<Vec2, 3> dl = {Vec2{-1.0, -1.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
  if (degree == 1) {
    for (int i = 0; i < 3; ++i) {
      out.values[i] = l[i];
      out.gradients[i] = dl[i];
    }
    return out;
  }
  for (int i = 0; i < 3; ++i) {
    out.values[i] = l[i] * (2.0 * l[i] - 1.0);
    out.gradients[i] = (4.0 * l[i] - 1.0) * dl[i];
  }
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3, b = (k + 2) % 3;
    out.values[3 + k] = 4.0 * l[a] * l[b];
    out.gradients[3 + k] = 4.0 * (l[b] * dl[a] + l[a] * dl[b]);
  }
  return out;
}

std::vector<int> FunctionSpace::dirichlet_dofs() const {
  std::vector<int> out;
  for (int d = 0; d < dofs(); ++d) {
    if (dirichlet[static_cast<std::size_t>(d)]) out.push_back(d);
  }
  return out;
}

Vec2 FunctionSpace::map_to_physical(int c, Vec2 ref) const {
  const auto& cv = cell_vertices[static_cast<std::size_t>(c)];
  const Vec2 a = vertices[cv[0]], b = vertices[cv[1]];
  if (cell == CellType::Segment) return a + ref.x * (b - a);
  const Vec2 d = vertices[cv[2]];
  return a + ref.x * (b - a) + ref.y * (d - a);
}

Vec2 FunctionSpace::physical_gradient(int c, Vec2 g) const {
  const auto& cv = cell_vertices[static_cast<std::size_t>(c)];
  const Vec2 a = vertices[cv[0]];
  const Vec2 e1 = vertices[cv[1]] - a;
  if (cell == CellType::Segment) {
    const double len = norm(e1);
    return (g.x / len) * (e1 * (1.0 / len));
  }
  const Vec2 e2 = vertices[cv[2]] - a;
  const double det = cross(e1, e2);
  return {(e2.y * g.x - e1.y * g.y) / det, (-e2.x * g.x + e1.x * g.y) / det};
}

double FunctionSpace::jacobian(int c) const {
  const auto& cv = cell_vertices[static_cast<std::size_t>(c)];
  const Vec2 a = vertices[cv[0]];
  const Vec2 e1 = vertices[cv[1]] - a;
  if (cell == CellType::Segment) return norm(e1);
  return std::abs(cross(e1, vertices[cv[2]] - a));
}

Vec2 FunctionSpace::map_to_reference(int c, Vec2 x) const {
  const auto& cv = cell_vertices[static_cast<std::size_t>(c)];
  const Vec2 a = vertices[cv[0]];
  const Vec2 e1 = vertices[cv[1]] - a;
  const Vec2 dx = x - a;
  if (cell == CellType::Segment) return {dot(dx, e1) / dot(e1, e1), 0.0};
  const Vec2 e2 = vertices[cv[2]] - a;
  const double det = cross(e1, e2);
  return {(e2.y * dx.x - e2.x * dx.y) / det, (-e1.y * dx.x + e1.x * dx.y) / det};
}

FunctionSpace build_space(const SubdomainMesh& mesh, int degree, int components,
                          std::span<const BoundaryTag> dirichlet_tags, bool pressure_field) {
  scalar_basis_count(CellType::Triangle, degree);
  FunctionSpace sp;
  sp.cell = CellType::Triangle;
  sp.degree = degree;
  sp.components = components;
  sp.vertices = mesh.vertices;
  sp.cell_vertices = mesh.triangles;
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nt = static_cast<int>(mesh.triangles.size());
  sp.cell_nodes.resize(static_cast<std::size_t>(nt));
  if (degree == 0) {
    sp.n_nodes = nt;
    for (int t = 0; t < nt; ++t) {
      sp.cell_nodes[t] = {t};
      const auto v = mesh.triangle_vertices(t);
      sp.node_coords.push_back((v[0] + v[1] + v[2]) * (1.0 / 3.0));
    }
  } else {
    sp.n_nodes = degree == 1 ? nv : nv + static_cast<int>(mesh.edges.size());
    sp.node_coords = mesh.vertices;
    if (degree == 2) {
      for (const auto& e : mesh.edges) {
        sp.node_coords.push_back((mesh.vertices[e[0]] + mesh.vertices[e[1]]) * 0.5);
      }
    }
    for (int t = 0; t < nt; ++t) {
      const auto& tri = mesh.triangles[t];
      std::vector<int> nodes = {tri[0], tri[1], tri[2]};
      if (degree == 2) {
        for (int k = 0; k < 3; ++k) nodes.push_back(nv + mesh.triangle_edges[t][k]);
      }
      sp.cell_nodes[t] = std::move(nodes);
    }
  }

  sp.dirichlet.assign(static_cast<std::size_t>(sp.dofs()), 0);
  if (degree > 0) {
    for (const auto& be : mesh.boundary_edges) {
      const BoundaryTag tag = pressure_field ? be.pressure_tag : be.primary_tag;
      if (std::find(dirichlet_tags.begin(), dirichlet_tags.end(), tag) == dirichlet_tags.end()) {
        continue;
      }
      std::vector<int> nodes = {be.vertices[0], be.vertices[1]};
      if (degree == 2) {
        nodes.push_back(nv + mesh.triangle_edges[be.triangle][be.local_edge]);
      }
      for (int c = 0; c < components; ++c) {
        for (int node : nodes) sp.dirichlet[static_cast<std::size_t>(sp.dof(c, node))] = 1;
      }
    }
  }
  return sp;
}

FunctionSpace build_space(const InterfaceMesh& mesh, int degree, int components) {
  scalar_basis_count(CellType::Segment, degree);
  FunctionSpace sp;
  sp.cell = CellType::Segment;
  sp.degree = degree;
  sp.components = components;
  sp.vertices = mesh.vertices;
  const int nv = static_cast<int>(mesh.vertices.size());
  const int ns = static_cast<int>(mesh.segments.size());
  for (int s = 0; s < ns; ++s) {
    const auto& seg = mesh.segments[static_cast<std::size_t>(s)];
    sp.cell_vertices.push_back({seg[0], seg[1], -1});
    const Vec2 mid = (mesh.vertices[seg[0]] + mesh.vertices[seg[1]]) * 0.5;
    if (degree == 0) {
      sp.cell_nodes.push_back({s});
      sp.node_coords.push_back(mid);
    } else if (degree == 1) {
      sp.cell_nodes.push_back({seg[0], seg[1]});
    } else {
      sp.cell_nodes.push_back({seg[0], seg[1], nv + s});
    }
  }
  if (degree == 0) {
    sp.n_nodes = ns;
  } else {
    sp.node_coords = mesh.vertices;
    sp.n_nodes = nv;
    if (degree == 2) {
      for (int s = 0; s < ns; ++s) {
        const auto& seg = mesh.segments[static_cast<std::size_t>(s)];
        sp.node_coords.push_back((mesh.vertices[seg[0]] + mesh.vertices[seg[1]]) * 0.5);
      }
      sp.n_nodes = nv + ns;
    }
  }
  sp.dirichlet.assign(static_cast<std::size_t>(sp.dofs()), 0);
  return sp;
}

Eigen::VectorXd interpolate(const FunctionSpace& space, const ScalarFn& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dofs());
  for (int i = 0; i < space.n_nodes; ++i) {
    const double v = f(space.node_coords[static_cast<std::size_t>(i)]);
    for (int c = 0; c < space.components; ++c) out[space.dof(c, i)] = v;
  }
  return out;
}

Eigen::VectorXd interpolate(const FunctionSpace& space, const VectorFn& f) {
  if (space.components != 2) throw Error(ErrorKind::SpaceMismatch, "vector interpolation needs 2 components");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.dofs());
  for (int i = 0; i < space.n_nodes; ++i) {
    const Vec2 v = f(space.node_coords[static_cast<std::size_t>(i)]);
    out[space.dof(0, i)] = v.x;
    out[space.dof(1, i)] = v.y;
  }
  return out;
}

double evaluate_scalar(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int c, Vec2 ref) {
  const auto b = reference_basis(space.cell, space.degree, 1, ref);
  const auto& nodes = space.cell_nodes[static_cast<std::size_t>(c)];
  double v = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) v += b.values[i] * coeffs[nodes[i]];
  return v;
}

Vec2 evaluate_vector(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int c, Vec2 ref) {
  const auto b = reference_basis(space.cell, space.degree, 1, ref);
  const auto& nodes = space.cell_nodes[static_cast<std::size_t>(c)];
  Vec2 v;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    v.x += b.values[i] * coeffs[space.dof(0, nodes[i])];
    v.y += b.values[i] * coeffs[space.dof(1, nodes[i])];
  }
  return v;
}

Mat2 evaluate_vector_gradient(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int c,
                              Vec2 ref) {
  const auto b = reference_basis(space.cell, space.degree, 1, ref);
  const auto& nodes = space.cell_nodes[static_cast<std::size_t>(c)];
  Mat2 g{};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Vec2 dphi = space.physical_gradient(c, b.gradients[i]);
    for (int comp = 0; comp < 2; ++comp) {
      const double coef = coeffs[space.dof(comp, nodes[i])];
      g[comp][0] += coef * dphi.x;
      g[comp][1] += coef * dphi.y;
    }
  }
  return g;
}

Vec2 evaluate_scalar_gradient(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int c,
                              Vec2 ref) {
  const auto b = reference_basis(space.cell, space.degree, 1, ref);
  const auto& nodes = space.cell_nodes[static_cast<std::size_t>(c)];
  Vec2 g;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    g = g + coeffs[nodes[i]] * space.physical_gradient(c, b.gradients[i]);
  }
  return g;
}

}  // namespace fpsi
