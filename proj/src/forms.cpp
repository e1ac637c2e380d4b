#include "fpsi/forms.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace fpsi {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

constexpr int kVolumeOrder = 4;
constexpr int kLoadOrder = 6;
constexpr int kSegmentOrder = 8;

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw Error(ErrorKind::NonPositiveParam, std::string(name) + " must be positive");
}

// Physical values and gradients of the scalar basis at one reference point.
struct CellBasis {
  std::vector<double> values;
  std::vector<Vec2> grads;
};

CellBasis cell_basis(const FunctionSpace& sp, int c, Vec2 ref) {
  const auto b = reference_basis(sp.cell, sp.degree, 1, ref);
  CellBasis out;
  out.values = b.values;
  out.grads.resize(b.gradients.size());
  for (std::size_t i = 0; i < b.gradients.size(); ++i) out.grads[i] = sp.physical_gradient(c, b.gradients[i]);
  return out;
}

template <class Kernel>
SparseMatrix assemble_cells(const FunctionSpace& test, const FunctionSpace& trial, int order, Kernel&& kernel) {
  if (test.cells() != trial.cells() || test.cell != trial.cell) {
    throw Error(ErrorKind::SpaceMismatch, "spaces live on different meshes");
  }
  const auto q = quadrature_rule(test.cell, order);
  Triplets t;
  for (int c = 0; c < test.cells(); ++c) {
    const double jac = test.jacobian(c);
    const auto& tn = test.cell_nodes[c];
    const auto& rn = trial.cell_nodes[c];
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const auto bt = cell_basis(test, c, q.points[k]);
      const auto br = cell_basis(trial, c, q.points[k]);
      const double w = q.weights[k] * jac;
      kernel(t, w, tn, rn, bt, br);
    }
  }
  return from_triplets(test.dofs(), trial.dofs(), t);
}

void require_components(const FunctionSpace& sp, int n, const char* what) {
  if (sp.components != n) throw Error(ErrorKind::SpaceMismatch, what);
}

SparseMatrix block_diag(const SparseMatrix& a, const SparseMatrix& b) {
  Triplets t;
  for (int r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  for (int r = 0; r < b.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(b, r); it; ++it) {
      t.emplace_back(a.rows() + it.row(), a.cols() + it.col(), it.value());
    }
  }
  return from_triplets(static_cast<int>(a.rows() + b.rows()), static_cast<int>(a.cols() + b.cols()), t);
}

// Integrates data against the interface trace of a vector volume space:
// rows of `out` are volume dofs, `weight(x)` gives the vector integrand.
void add_interface_vector_load(Eigen::VectorXd& out, int offset, const FunctionSpace& sp,
                               const InterfaceMesh& gamma, bool fluid_side, const VectorFn& f) {
  const auto q = quadrature_rule(CellType::Segment, kSegmentOrder);
  for (int s = 0; s < static_cast<int>(gamma.segments.size()); ++s) {
    const Vec2 a = gamma.vertices[gamma.segments[s][0]];
    const Vec2 b = gamma.vertices[gamma.segments[s][1]];
    const double len = gamma.segment_length(s);
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Vec2 x = a + q.points[k].x * (b - a);
      const Vec2 v = f(x);
      const auto tr = trace_basis(sp, gamma, fluid_side, s, x);
      for (std::size_t i = 0; i < tr.nodes.size(); ++i) {
        const double w = q.weights[k] * len * tr.values[i];
        out[offset + sp.dof(0, tr.nodes[i])] += w * v.x;
        out[offset + sp.dof(1, tr.nodes[i])] += w * v.y;
      }
    }
  }
}

// Boundary edges of the mesh carrying `tag`; integrates f against the trace.
void add_neumann_load(Eigen::VectorXd& out, const FunctionSpace& sp, const SubdomainMesh& mesh, BoundaryTag tag,
                      bool pressure_field, const std::function<void(Vec2, double, int, Eigen::VectorXd&)>& scatter) {
  const auto q = quadrature_rule(CellType::Segment, kSegmentOrder);
  for (const auto& be : mesh.boundary_edges) {
    const BoundaryTag t = pressure_field ? be.pressure_tag : be.primary_tag;
    if (t != tag) continue;
    const Vec2 a = mesh.vertices[be.vertices[0]];
    const Vec2 b = mesh.vertices[be.vertices[1]];
    const double len = norm(b - a);
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Vec2 x = a + q.points[k].x * (b - a);
      const Vec2 ref = sp.map_to_reference(be.triangle, x);
      const auto bv = reference_basis(sp.cell, sp.degree, 1, ref);
      const auto& nodes = sp.cell_nodes[be.triangle];
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        scatter(x, q.weights[k] * len * bv.values[i], nodes[i], out);
      }
    }
  }
}

template <class Fn>
void add_volume_load(Eigen::VectorXd& out, int offset, const FunctionSpace& sp, Fn&& f) {
  const auto q = quadrature_rule(CellType::Triangle, kLoadOrder);
  for (int c = 0; c < sp.cells(); ++c) {
    const double jac = sp.jacobian(c);
    const auto& nodes = sp.cell_nodes[c];
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Vec2 x = sp.map_to_physical(c, q.points[k]);
      const auto bv = reference_basis(sp.cell, sp.degree, 1, q.points[k]);
      for (std::size_t i = 0; i < nodes.size(); ++i) f(out, offset, nodes[i], x, q.weights[k] * jac * bv.values[i]);
    }
  }
}

// Interface coupling between a vector volume space and a scalar interface
// space: entry (s, v) = ∫_γ (v·dir) s.
SparseMatrix interface_vector_coupling(const FunctionSpace& vol, const FunctionSpace& mult,
                                       const InterfaceMesh& gamma, bool fluid_side, Vec2 dir) {
  const auto q = quadrature_rule(CellType::Segment, kSegmentOrder);
  Triplets t;
  for (int s = 0; s < static_cast<int>(gamma.segments.size()); ++s) {
    const Vec2 a = gamma.vertices[gamma.segments[s][0]];
    const Vec2 b = gamma.vertices[gamma.segments[s][1]];
    const double len = gamma.segment_length(s);
    const auto& mn = mult.cell_nodes[s];
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Vec2 x = a + q.points[k].x * (b - a);
      const auto tr = trace_basis(vol, gamma, fluid_side, s, x);
      const auto mb = reference_basis(CellType::Segment, mult.degree, 1, q.points[k]);
      for (std::size_t i = 0; i < mn.size(); ++i) {
        for (std::size_t j = 0; j < tr.nodes.size(); ++j) {
          const double w = q.weights[k] * len * mb.values[i] * tr.values[j];
          for (int c = 0; c < 2; ++c) {
            if (dir[c] != 0.0) t.emplace_back(mn[i], vol.dof(c, tr.nodes[j]), w * dir[c]);
          }
        }
      }
    }
  }
  return from_triplets(mult.dofs(), vol.dofs(), t);
}

SparseMatrix interface_scalar_coupling(const FunctionSpace& vol, const FunctionSpace& mult,
                                       const InterfaceMesh& gamma, bool fluid_side) {
  const auto q = quadrature_rule(CellType::Segment, kSegmentOrder);
  Triplets t;
  for (int s = 0; s < static_cast<int>(gamma.segments.size()); ++s) {
    const Vec2 a = gamma.vertices[gamma.segments[s][0]];
    const Vec2 b = gamma.vertices[gamma.segments[s][1]];
    const double len = gamma.segment_length(s);
    const auto& mn = mult.cell_nodes[s];
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const Vec2 x = a + q.points[k].x * (b - a);
      const auto tr = trace_basis(vol, gamma, fluid_side, s, x);
      const auto mb = reference_basis(CellType::Segment, mult.degree, 1, q.points[k]);
      for (std::size_t i = 0; i < mn.size(); ++i) {
        for (std::size_t j = 0; j < tr.nodes.size(); ++j) {
          t.emplace_back(mn[i], tr.nodes[j], q.weights[k] * len * mb.values[i] * tr.values[j]);
        }
      }
    }
  }
  return from_triplets(mult.dofs(), vol.dofs(), t);
}

SparseMatrix interface_mass_between(const FunctionSpace& rows, const FunctionSpace& cols) {
  const auto q = quadrature_rule(CellType::Segment, kSegmentOrder);
  Triplets t;
  for (int s = 0; s < rows.cells(); ++s) {
    const double len = rows.jacobian(s);
    const auto& rn = rows.cell_nodes[s];
    const auto& cn = cols.cell_nodes[s];
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      const auto rb = reference_basis(CellType::Segment, rows.degree, 1, q.points[k]);
      const auto cb = reference_basis(CellType::Segment, cols.degree, 1, q.points[k]);
      for (std::size_t i = 0; i < rn.size(); ++i) {
        for (std::size_t j = 0; j < cn.size(); ++j) {
          t.emplace_back(rn[i], cn[j], q.weights[k] * len * rb.values[i] * cb.values[j]);
        }
      }
    }
  }
  return from_triplets(rows.dofs(), cols.dofs(), t);
}

SparseMatrix hstack(const SparseMatrix& a, const SparseMatrix& b) {
  Triplets t;
  for (int r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  for (int r = 0; r < b.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(b, r); it; ++it) t.emplace_back(it.row(), a.cols() + it.col(), it.value());
  }
  return from_triplets(static_cast<int>(a.rows()), static_cast<int>(a.cols() + b.cols()), t);
}

void check_history(const Eigen::VectorXd& v, int n, const char* what) {
  if (v.size() != n) throw Error(ErrorKind::MissingHistory, std::string(what) + " has the wrong size");
}

}  // namespace

void PhysicalParams::validate(bool allow_zero_eps_bar) const {
  require_positive(rho_f, "rho_f");
  require_positive(nu_f, "nu_f");
  require_positive(rho_p, "rho_p");
  require_positive(nu_p, "nu_p");
  require_positive(lambda, "lambda");
  require_positive(alpha, "alpha");
  require_positive(s0, "s0");
  require_positive(kappa, "kappa");
  require_positive(beta, "beta");
  if (allow_zero_eps_bar) {
    if (!(eps_bar >= 0.0)) throw Error(ErrorKind::NonPositiveParam, "eps_bar must be non-negative");
  } else {
    require_positive(eps_bar, "eps_bar");
  }
}

DiscreteSpaces build_spaces(const Geometry& geometry) {
  DiscreteSpaces s;
  s.geometry = geometry;
  const std::array<BoundaryTag, 1> dir_f{BoundaryTag::DirichletF};
  const std::array<BoundaryTag, 1> dir_s{BoundaryTag::DirichletS};
  const std::array<BoundaryTag, 1> dir_p{BoundaryTag::DirichletP};
  s.velocity = build_space(*geometry.fluid, 2, 2, dir_f);
  s.fluid_pressure = build_space(*geometry.fluid, 1, 1, {});
  s.displacement = build_space(*geometry.poro, 2, 2, dir_s);
  s.pore_pressure = build_space(*geometry.poro, 1, 1, dir_p, true);
  s.g1 = build_space(*geometry.interface, 0);
  s.g2 = build_space(*geometry.interface, 0);
  s.lambda = build_space(*geometry.interface, 1);
  return s;
}

SparseMatrix mass_matrix(const FunctionSpace& sp) {
  const int nc = sp.components;
  return assemble_cells(sp, sp, kVolumeOrder, [&](Triplets& t, double w, const auto& tn, const auto& rn,
                                                  const CellBasis& bt, const CellBasis& br) {
    for (std::size_t i = 0; i < tn.size(); ++i) {
      for (std::size_t j = 0; j < rn.size(); ++j) {
        const double v = w * bt.values[i] * br.values[j];
        for (int c = 0; c < nc; ++c) t.emplace_back(sp.dof(c, tn[i]), sp.dof(c, rn[j]), v);
      }
    }
  });
}

SparseMatrix stiffness_matrix(const FunctionSpace& sp) {
  require_components(sp, 1, "stiffness matrix needs a scalar space");
  return assemble_cells(sp, sp, kVolumeOrder, [&](Triplets& t, double w, const auto& tn, const auto& rn,
                                                  const CellBasis& bt, const CellBasis& br) {
    for (std::size_t i = 0; i < tn.size(); ++i) {
      for (std::size_t j = 0; j < rn.size(); ++j) t.emplace_back(tn[i], rn[j], w * dot(bt.grads[i], br.grads[j]));
    }
  });
}

SparseMatrix strain_matrix(const FunctionSpace& sp) {
  require_components(sp, 2, "strain matrix needs a vector space");
  return assemble_cells(sp, sp, kVolumeOrder, [&](Triplets& t, double w, const auto& tn, const auto& rn,
                                                  const CellBasis& bt, const CellBasis& br) {
    for (std::size_t i = 0; i < tn.size(); ++i) {
      for (std::size_t j = 0; j < rn.size(); ++j) {
        const Vec2 ga = bt.grads[i], gb = br.grads[j];
        for (int c = 0; c < 2; ++c) {
          for (int d = 0; d < 2; ++d) {
            const double v = 0.5 * ((c == d ? dot(ga, gb) : 0.0) + ga[d] * gb[c]);
            t.emplace_back(sp.dof(c, tn[i]), sp.dof(d, rn[j]), w * v);
          }
        }
      }
    }
  });
}

SparseMatrix div_div_matrix(const FunctionSpace& sp) {
  require_components(sp, 2, "div-div matrix needs a vector space");
  return assemble_cells(sp, sp, kVolumeOrder, [&](Triplets& t, double w, const auto& tn, const auto& rn,
                                                  const CellBasis& bt, const CellBasis& br) {
    for (std::size_t i = 0; i < tn.size(); ++i) {
      for (std::size_t j = 0; j < rn.size(); ++j) {
        for (int c = 0; c < 2; ++c) {
          for (int d = 0; d < 2; ++d) {
            t.emplace_back(sp.dof(c, tn[i]), sp.dof(d, rn[j]), w * bt.grads[i][c] * br.grads[j][d]);
          }
        }
      }
    }
  });
}

SparseMatrix divergence_matrix(const FunctionSpace& vec, const FunctionSpace& scal) {
  require_components(vec, 2, "divergence needs a vector trial space");
  require_components(scal, 1, "divergence needs a scalar test space");
  return assemble_cells(scal, vec, kVolumeOrder, [&](Triplets& t, double w, const auto& tn, const auto& rn,
                                                     const CellBasis& bt, const CellBasis& br) {
    for (std::size_t i = 0; i < tn.size(); ++i) {
      for (std::size_t j = 0; j < rn.size(); ++j) {
        for (int d = 0; d < 2; ++d) t.emplace_back(tn[i], vec.dof(d, rn[j]), w * bt.values[i] * br.grads[j][d]);
      }
    }
  });
}

SparseMatrix assemble_volume_form(VolumeForm form, const DiscreteSpaces& s, const PhysicalParams& p, double dt) {
  require_positive(dt, "dt");
  switch (form) {
    case VolumeForm::A1: {
      SparseMatrix au = p.rho_f * mass_matrix(s.velocity) + (2.0 * p.nu_f * dt) * strain_matrix(s.velocity);
      SparseMatrix ax = p.rho_p * mass_matrix(s.displacement) +
                        (2.0 * p.nu_p * dt * dt) * strain_matrix(s.displacement) +
                        (dt * dt * p.lambda) * div_div_matrix(s.displacement);
      return block_diag(au, ax);
    }
    case VolumeForm::A2:
      return (p.s0 / (dt * dt)) * mass_matrix(s.pore_pressure) + (p.kappa / dt) * stiffness_matrix(s.pore_pressure);
    case VolumeForm::BPP:
      return -p.alpha * divergence_matrix(s.displacement, s.pore_pressure);
    case VolumeForm::BPF:
      return -1.0 * divergence_matrix(s.velocity, s.fluid_pressure);
  }
  throw Error(ErrorKind::SpaceMismatch, "unknown volume form");
}

TraceEval trace_basis(const FunctionSpace& sp, const InterfaceMesh& gamma, bool fluid_side, int segment, Vec2 x) {
  const auto& adj = fluid_side ? gamma.f_edge_map[segment] : gamma.p_edge_map[segment];
  if (adj.triangle < 0 || adj.triangle >= sp.cells()) {
    throw Error(ErrorKind::SpaceMismatch, "interface adjacency does not match the volume space");
  }
  const Vec2 ref = sp.map_to_reference(adj.triangle, x);
  const auto b = reference_basis(sp.cell, sp.degree, 1, ref);
  return {sp.cell_nodes[adj.triangle], b.values};
}

SparseMatrix assemble_interface_form(InterfaceForm form, const DiscreteSpaces& s, const PhysicalParams& p,
                                     double dt) {
  require_positive(dt, "dt");
  const auto& gamma = *s.geometry.interface;
  if (std::abs(dot(gamma.n_f, gamma.n_p) + 1.0) > 1e-14 || std::abs(dot(gamma.tau, gamma.n_f)) > 1e-14) {
    throw Error(ErrorKind::OrientationError, "interface normals are inconsistent");
  }
  switch (form) {
    case InterfaceForm::AG:
      return (1.0 / (p.beta * dt)) * mass_matrix(s.g2);
    case InterfaceForm::BG1: {
      SparseMatrix bu = -1.0 * interface_vector_coupling(s.velocity, s.g1, gamma, true, gamma.n_f);
      SparseMatrix bx = -1.0 * interface_vector_coupling(s.displacement, s.g1, gamma, false, gamma.n_p);
      return hstack(bu, bx);
    }
    case InterfaceForm::BG2: {
      SparseMatrix bu = -1.0 * interface_vector_coupling(s.velocity, s.g2, gamma, true, gamma.tau);
      SparseMatrix bx = interface_vector_coupling(s.displacement, s.g2, gamma, false, gamma.tau);
      return hstack(bu, bx);
    }
    case InterfaceForm::BLM:
      return interface_mass_between(s.g1, s.lambda);
    case InterfaceForm::B2:
      return interface_scalar_coupling(s.pore_pressure, s.lambda, gamma, false);
  }
  throw Error(ErrorKind::SpaceMismatch, "unknown interface form");
}

namespace {

void require_h_half_space(const FunctionSpace& sp) {
  if (sp.cell != CellType::Segment || sp.degree != 1 || sp.components != 1) {
    throw Error(ErrorKind::SpaceMismatch, "H^1/2 Gram needs a continuous P1 interface space");
  }
}

// Quadrature for the double integral over two distinct segments K != L.
// Touching segments use a polar-type split at the shared vertex, where the
// integrand is homogeneous of degree 0 in the distances from that vertex.
template <class Fn>
void pair_quadrature(const FunctionSpace& sp, int K, int L, Fn&& fn) {
  static const auto g8 = gauss_legendre(8);
  static const auto g16 = gauss_legendre(16);
  const auto& nk = sp.cell_nodes[K];
  const auto& nl = sp.cell_nodes[L];
  const Vec2 ka = sp.vertices[sp.cell_vertices[K][0]], kb = sp.vertices[sp.cell_vertices[K][1]];
  const Vec2 la = sp.vertices[sp.cell_vertices[L][0]], lb = sp.vertices[sp.cell_vertices[L][1]];
  const double hk = norm(kb - ka), hl = norm(lb - la);
  int shared = -1;
  for (int v : nk) {
    if (v == nl[0] || v == nl[1]) shared = v;
  }
  if (shared >= 0) {
    const Vec2 c = sp.vertices[shared];
    const Vec2 dk = (((nk[0] == shared) ? kb : ka) - c) * (1.0 / hk);
    const Vec2 dl = (((nl[0] == shared) ? lb : la) - c) * (1.0 / hl);
    for (std::size_t q = 0; q < g16.points.size(); ++q) {
      const double v = g16.points[q].x;
      const double w = 0.5 * hk * hl * g16.weights[q];
      fn(c + hk * dk, c + (hl * v) * dl, w);
      fn(c + (hk * v) * dk, c + hl * dl, w);
    }
    return;
  }
  for (std::size_t a = 0; a < g8.points.size(); ++a) {
    const Vec2 x = ka + g8.points[a].x * (kb - ka);
    for (std::size_t b = 0; b < g8.points.size(); ++b) {
      fn(x, la + g8.points[b].x * (lb - la), g8.weights[a] * g8.weights[b] * hk * hl);
    }
  }
}

}  // namespace

SparseMatrix assemble_h_half_gram(const FunctionSpace& sp) {
  require_h_half_space(sp);
  Eigen::MatrixXd S = Eigen::MatrixXd(mass_matrix(sp));
  const int ns = sp.cells();

  auto hat = [&](int node, int cell, Vec2 x) {
    const auto& cn = sp.cell_nodes[cell];
    const double t = sp.map_to_reference(cell, x).x;
    if (cn[0] == node) return 1.0 - t;
    if (cn[1] == node) return t;
    return 0.0;
  };

  for (int K = 0; K < ns; ++K) {
    const auto& nk = sp.cell_nodes[K];
    // Same segment: the difference quotient of a linear function is its slope.
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) S(nk[i], nk[j]) += (i == j ? 1.0 : -1.0);
    }
    for (int L = 0; L < ns; ++L) {
      if (L == K) continue;
      std::vector<int> local = {nk[0], nk[1]};
      for (int v : sp.cell_nodes[L]) {
        if (v != nk[0] && v != nk[1]) local.push_back(v);
      }
      pair_quadrature(sp, K, L, [&](Vec2 x, Vec2 y, double w) {
        const double r = norm(x - y);
        std::array<double, 4> d{};
        for (std::size_t i = 0; i < local.size(); ++i) d[i] = hat(local[i], K, x) - hat(local[i], L, y);
        const double f = w / (r * r);
        for (std::size_t i = 0; i < local.size(); ++i) {
          for (std::size_t j = 0; j < local.size(); ++j) S(local[i], local[j]) += f * d[i] * d[j];
        }
      });
    }
  }
  S = 0.5 * (S + S.transpose()).eval();
  return S.sparseView();
}

double h_half_seminorm_squared(const FunctionSpace& sp, const Eigen::VectorXd& coeffs) {
  require_h_half_space(sp);
  if (coeffs.size() != sp.dofs()) throw Error(ErrorKind::DimensionMismatch, "coefficient vector does not match the space");
  const auto value = [&](int cell, Vec2 x) {
    const auto& cn = sp.cell_nodes[cell];
    const double t = sp.map_to_reference(cell, x).x;
    return coeffs[cn[0]] + t * (coeffs[cn[1]] - coeffs[cn[0]]);
  };
  double sum = 0.0;
  for (int K = 0; K < sp.cells(); ++K) {
    const auto& nk = sp.cell_nodes[K];
    const double jump = coeffs[nk[1]] - coeffs[nk[0]];
    sum += jump * jump;
    for (int L = 0; L < sp.cells(); ++L) {
      if (L == K) continue;
      pair_quadrature(sp, K, L, [&](Vec2 x, Vec2 y, double w) {
        const double d = value(K, x) - value(L, y);
        sum += w * d * d / dot(x - y, x - y);
      });
    }
  }
  return sum;
}

Eigen::VectorXd assemble_load(LoadId load, const DiscreteSpaces& s, const LoadData& data, const LoadHistory& h,
                              const PhysicalParams& p, double dt) {
  require_positive(dt, "dt");
  const auto& gamma = *s.geometry.interface;
  const int nu = s.velocity.dofs(), nx = s.displacement.dofs();
  switch (load) {
    case LoadId::F1: {
      check_history(h.u, nu, "velocity history");
      check_history(h.eta_hat, nx, "displacement history");
      check_history(h.eta_hat_prev, nx, "previous displacement history");
      Eigen::VectorXd f = Eigen::VectorXd::Zero(nu + nx);
      auto vector_force = [dt](const VectorFn& fn, const FunctionSpace& sp) {
        return [&fn, &sp, dt](Eigen::VectorXd& out, int off, int node, Vec2 x, double w) {
          const Vec2 v = fn(x);
          out[off + sp.dof(0, node)] += dt * w * v.x;
          out[off + sp.dof(1, node)] += dt * w * v.y;
        };
      };
      if (data.fluid_force) add_volume_load(f, 0, s.velocity, vector_force(data.fluid_force, s.velocity));
      if (data.solid_force) add_volume_load(f, nu, s.displacement, vector_force(data.solid_force, s.displacement));
      auto traction = [dt](const VectorFn& fn, const FunctionSpace& sp, int off) {
        return [&fn, &sp, dt, off](Vec2 x, double w, int node, Eigen::VectorXd& out) {
          const Vec2 v = fn(x);
          out[off + sp.dof(0, node)] += dt * w * v.x;
          out[off + sp.dof(1, node)] += dt * w * v.y;
        };
      };
      if (data.fluid_traction) {
        add_neumann_load(f, s.velocity, *s.geometry.fluid, BoundaryTag::NeumannF, false,
                         traction(data.fluid_traction, s.velocity, 0));
      }
      if (data.solid_traction) {
        add_neumann_load(f, s.displacement, *s.geometry.poro, BoundaryTag::NeumannS, false,
                         traction(data.solid_traction, s.displacement, nu));
      }
      if (data.stress_jump) {
        const VectorFn scaled = [&](Vec2 x) { return dt * data.stress_jump(x); };
        add_interface_vector_load(f, nu, s.displacement, gamma, false, scaled);
      }
      f.head(nu) += p.rho_f * (mass_matrix(s.velocity) * h.u);
      f.tail(nx) += p.rho_p * (mass_matrix(s.displacement) * (2.0 * h.eta_hat - h.eta_hat_prev));
      return f;
    }
    case LoadId::F2: {
      const auto& sp = s.pore_pressure;
      check_history(h.p_hat, sp.dofs(), "pressure history");
      check_history(h.eta_hat, nx, "displacement history");
      Eigen::VectorXd f = Eigen::VectorXd::Zero(sp.dofs());
      if (data.pressure_source) {
        add_volume_load(f, 0, sp, [&](Eigen::VectorXd& out, int, int node, Vec2 x, double w) {
          out[node] += w * data.pressure_source(x);
        });
      }
      if (data.pressure_flux) {
        add_neumann_load(f, sp, *s.geometry.poro, BoundaryTag::NeumannP, true,
                         [&](Vec2 x, double w, int node, Eigen::VectorXd& out) { out[node] += w * data.pressure_flux(x); });
      }
      f += (p.s0 / (dt * dt)) * (mass_matrix(sp) * h.p_hat);
      f += p.alpha * (divergence_matrix(s.displacement, sp) * h.eta_hat);
      return f;
    }
    case LoadId::F3: {
      check_history(h.eta_hat, nx, "displacement history");
      Eigen::VectorXd f = interface_vector_coupling(s.displacement, s.g1, gamma, false, gamma.n_p) * h.eta_hat;
      if (data.mass_defect) {
        const auto q = quadrature_rule(CellType::Segment, kSegmentOrder);
        for (int c = 0; c < s.g1.cells(); ++c) {
          for (std::size_t k = 0; k < q.points.size(); ++k) {
            const Vec2 x = s.g1.map_to_physical(c, q.points[k]);
            f[s.g1.cell_nodes[c][0]] += q.weights[k] * s.g1.jacobian(c) * data.mass_defect(x);
          }
        }
      }
      return f;
    }
    case LoadId::F4: {
      check_history(h.eta_hat, nx, "displacement history");
      Eigen::VectorXd f = -(interface_vector_coupling(s.displacement, s.g2, gamma, false, gamma.tau) * h.eta_hat);
      if (data.slip_defect) {
        const auto q = quadrature_rule(CellType::Segment, kSegmentOrder);
        for (int c = 0; c < s.g2.cells(); ++c) {
          for (std::size_t k = 0; k < q.points.size(); ++k) {
            const Vec2 x = s.g2.map_to_physical(c, q.points[k]);
            f[s.g2.cell_nodes[c][0]] += q.weights[k] * s.g2.jacobian(c) * data.slip_defect(x);
          }
        }
      }
      return f;
    }
  }
  throw Error(ErrorKind::SpaceMismatch, "unknown load");
}

Eigen::VectorXd assemble_lambda_load(const DiscreteSpaces& s, const LoadData& data, double dt) {
  const auto& sp = s.lambda;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(sp.dofs());
  if (data.pressure_defect) {
    const auto q = quadrature_rule(CellType::Segment, kSegmentOrder);
    for (int c = 0; c < sp.cells(); ++c) {
      for (std::size_t k = 0; k < q.points.size(); ++k) {
        const Vec2 x = sp.map_to_physical(c, q.points[k]);
        const auto b = reference_basis(CellType::Segment, 1, 1, q.points[k]);
        const double v = dt * q.weights[k] * sp.jacobian(c) * data.pressure_defect(x);
        for (int i = 0; i < 2; ++i) f[sp.cell_nodes[c][i]] += v * b.values[i];
      }
    }
  }
  if (data.lambda_shift.size() == sp.dofs()) f += data.lambda_shift;
  return f;
}

}  // namespace fpsi
