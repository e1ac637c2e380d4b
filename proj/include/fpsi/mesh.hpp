#pragma once

#include <array>
#include <memory>
#include <vector>

#include "fpsi/common.hpp"

namespace fpsi {

enum class SubdomainId { Fluid, Poro };

enum class BoundaryTag {
  DirichletF,
  NeumannF,
  DirichletS,
  NeumannS,
  DirichletP,
  NeumannP,
  Interface,
};

/// Sides of an axis-aligned rectangle, counterclockwise from the bottom.
enum class Side { Bottom = 0, Right = 1, Top = 2, Left = 3 };

struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  [[nodiscard]] double area() const { return (x1 - x0) * (y1 - y0); }
};

/// Per-side tags. `primary` applies to the velocity (fluid) or displacement
/// (poro) field, `pressure` to the pore pressure; fluid meshes ignore it.
struct TagSpec {
  std::array<BoundaryTag, 4> primary{};
  std::array<BoundaryTag, 4> pressure{};
};

struct BoundaryEdge {
  std::array<int, 2> vertices{};
  int triangle = -1;
  int local_edge = -1;  // local edge k is opposite local vertex k
  Side side = Side::Bottom;
  BoundaryTag primary_tag = BoundaryTag::Interface;
  BoundaryTag pressure_tag = BoundaryTag::Interface;
};

struct SubdomainMesh {
  SubdomainId subdomain = SubdomainId::Fluid;
  Rect rect;
  int nx = 0;
  int ny = 0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<std::array<int, 2>> edges;      // unique, (min, max) vertex ids
  std::vector<std::array<int, 3>> triangle_edges;
  std::vector<BoundaryEdge> boundary_edges;

  [[nodiscard]] double signed_area(int t) const;
  [[nodiscard]] std::array<Vec2, 3> triangle_vertices(int t) const;
};

/// Conforming right-diagonal triangulation of `rect`: every cell
/// [i,i+1]x[j,j+1] is split along its (i,j)-(i+1,j+1) diagonal.
SubdomainMesh build_rect_mesh(const Rect& rect, int nx, int ny, SubdomainId subdomain,
                              const TagSpec& tags);

struct InterfaceAdjacency {
  int triangle = -1;
  int local_edge = -1;
};

struct InterfaceMesh {
  std::vector<Vec2> vertices;                  // ordered by arclength along tau
  std::vector<std::array<int, 2>> segments;    // (i, i+1)
  Vec2 n_f;
  Vec2 n_p;
  Vec2 tau;
  std::vector<InterfaceAdjacency> f_edge_map;  // segment -> fluid triangle edge
  std::vector<InterfaceAdjacency> p_edge_map;  // segment -> poro triangle edge

  [[nodiscard]] double length() const;
  [[nodiscard]] double segment_length(int s) const;
  /// Arclength coordinate of a point on the line, measured from vertices[0].
  [[nodiscard]] double arclength(Vec2 p) const;
};

/// Axis-aligned straight interface segment.
struct InterfaceLine {
  Vec2 a;
  Vec2 b;
};

InterfaceMesh extract_interface(const SubdomainMesh& mesh_f, const SubdomainMesh& mesh_p,
                                const InterfaceLine& gamma);

/// Shared-interface line of two rectangles that touch along one side.
InterfaceLine shared_side(const Rect& fluid, const Rect& poro);

/// Standard tag layout used by the CLI and the test geometries: the side
/// shared with the other rectangle is the interface, the side opposite to it is
/// Neumann for every field and the two remaining sides are Dirichlet.
TagSpec standard_tags(const Rect& own, const Rect& other, SubdomainId subdomain);

/// Fluid mesh, poro mesh and interface bundled together.
struct Geometry {
  std::shared_ptr<const SubdomainMesh> fluid;
  std::shared_ptr<const SubdomainMesh> poro;
  std::shared_ptr<const InterfaceMesh> interface;
};

Geometry build_geometry(const Rect& fluid, const Rect& poro, int nx, int ny);

/// Two unit squares stacked vertically: fluid (0,0)-(1,1) below, poro (0,1)-(1,2) above.
Geometry standard_geometry(int n);

}  // namespace fpsi
