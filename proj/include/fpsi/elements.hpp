#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fpsi/common.hpp"
#include "fpsi/mesh.hpp"

namespace fpsi {

enum class CellType { Triangle, Segment };

/// Reference cells: triangle (0,0),(1,0),(0,1); segment [0,1] (point.y ignored).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int order = 0;
};

/// Rule exact for polynomials of total degree <= order (order <= 6 for
/// triangles, any positive order for segments).
QuadratureRule quadrature_rule(CellType cell, int order);

/// Gauss-Legendre nodes/weights on [0,1].
QuadratureRule gauss_legendre(int n_points);

/// Scalar Lagrange basis evaluated at a reference point. For `components > 1`
/// the vector basis is ordered component-major: function c * n + i carries the
/// scalar function i in component c; `values`/`gradients` still hold the n
/// scalar entries, so callers index with i = k % n.
struct BasisEval {
  int components = 1;
  std::vector<double> values;
  std::vector<Vec2> gradients;  // reference gradients

  [[nodiscard]] int scalar_count() const { return static_cast<int>(values.size()); }
  [[nodiscard]] int count() const { return components * scalar_count(); }
};

int scalar_basis_count(CellType cell, int degree);
BasisEval reference_basis(CellType cell, int degree, int components, Vec2 point);

/// Lagrange space on a triangle mesh or on the interface.
///
/// Node numbering: P1 nodes are mesh vertices; P2 adds one node per edge
/// (triangles: `nv + edge`; segments: `nv + segment`); P0 has one node per cell.
/// Global dof of (component c, node i) is `c * n_nodes + i`.
struct FunctionSpace {
  CellType cell = CellType::Triangle;
  int degree = 1;
  int components = 1;
  int n_nodes = 0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cell_vertices;  // segments use the first two entries
  std::vector<std::vector<int>> cell_nodes;       // scalar node ids per cell
  std::vector<Vec2> node_coords;
  std::vector<char> dirichlet;  // per global dof

  [[nodiscard]] int dofs() const { return components * n_nodes; }
  [[nodiscard]] int dof(int component, int node) const { return component * n_nodes + node; }
  [[nodiscard]] int cells() const { return static_cast<int>(cell_nodes.size()); }
  [[nodiscard]] std::vector<int> dirichlet_dofs() const;

  /// Affine map data for a cell.
  [[nodiscard]] Vec2 map_to_physical(int c, Vec2 ref) const;
  /// Inverse-transposed Jacobian applied to a reference gradient (triangles).
  [[nodiscard]] Vec2 physical_gradient(int c, Vec2 ref_grad) const;
  /// |det J| for triangles, segment length for segments.
  [[nodiscard]] double jacobian(int c) const;
  /// Reference coordinates of a physical point (triangles only).
  [[nodiscard]] Vec2 map_to_reference(int c, Vec2 x) const;
};

/// Space on one subdomain; edges carrying any of `dirichlet_tags` (checked on
/// the primary tag, or on the pressure tag when `pressure_field`) are constrained.
FunctionSpace build_space(const SubdomainMesh& mesh, int degree, int components,
                          std::span<const BoundaryTag> dirichlet_tags, bool pressure_field = false);

/// Space on the interface (no Dirichlet conditions). Degree 0 is discontinuous.
FunctionSpace build_space(const InterfaceMesh& mesh, int degree, int components = 1);

using ScalarFn = std::function<double(Vec2)>;
using VectorFn = std::function<Vec2(Vec2)>;

/// Nodal interpolation (P0: value at the cell centroid). Constrained dofs are
/// left at their interpolated value; callers zero them when needed.
Eigen::VectorXd interpolate(const FunctionSpace& space, const ScalarFn& f);
Eigen::VectorXd interpolate(const FunctionSpace& space, const VectorFn& f);

/// Value of a finite element function at a reference point of cell c.
double evaluate_scalar(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int c, Vec2 ref);
Vec2 evaluate_vector(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int c, Vec2 ref);
/// Physical gradient (triangles). Row i holds the gradient of component i.
Mat2 evaluate_vector_gradient(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int c,
                              Vec2 ref);
Vec2 evaluate_scalar_gradient(const FunctionSpace& space, const Eigen::VectorXd& coeffs, int c,
                              Vec2 ref);

}  // namespace fpsi
