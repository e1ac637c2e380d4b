#include "fpsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace fpsi {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroCells: return "ZeroCells";
    case ErrorKind::InvalidRect: return "InvalidRect";
    case ErrorKind::NonMatching: return "NonMatching";
    case ErrorKind::NotOnLine: return "NotOnLine";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::OrientationError: return "OrientationError";
    case ErrorKind::NonPositiveParam: return "NonPositiveParam";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotSPD: return "NotSPD";
    case ErrorKind::MissingInitialData: return "MissingInitialData";
    case ErrorKind::MissingHistory: return "MissingHistory";
    case ErrorKind::HistoryMismatch: return "HistoryMismatch";
    case ErrorKind::UnknownCase: return "UnknownCase";
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::BadValue: return "BadValue";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

double SubdomainMesh::signed_area(int t) const {
  const auto [a, b, c] = triangle_vertices(t);
  return 0.5 * cross(b - a, c - a);
}

std::array<Vec2, 3> SubdomainMesh::triangle_vertices(int t) const {
  const auto& tri = triangles[static_cast<std::size_t>(t)];
  return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
}

namespace {

bool tag_allowed(SubdomainId sub, BoundaryTag tag, bool pressure_field) {
  if (tag == BoundaryTag::Interface) return true;
  if (sub == SubdomainId::Fluid) {
    return tag == BoundaryTag::DirichletF || tag == BoundaryTag::NeumannF;
  }
  if (pressure_field) return tag == BoundaryTag::DirichletP || tag == BoundaryTag::NeumannP;
  return tag == BoundaryTag::DirichletS || tag == BoundaryTag::NeumannS;
}

}  // namespace

SubdomainMesh build_rect_mesh(const Rect& rect, int nx, int ny, SubdomainId subdomain,
                              const TagSpec& tags) {
  if (nx <= 0 || ny <= 0) {
    throw Error(ErrorKind::ZeroCells, "build_rect_mesh needs nx, ny >= 1");
  }
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0) || !std::isfinite(rect.area())) {
    throw Error(ErrorKind::InvalidRect, "degenerate rectangle");
  }
  for (int s = 0; s < 4; ++s) {
    const bool ok_primary = tag_allowed(subdomain, tags.primary[s], false);
    const bool ok_pressure =
        subdomain == SubdomainId::Fluid || tag_allowed(subdomain, tags.pressure[s], true);
    if (!ok_primary || !ok_pressure) {
      throw Error(ErrorKind::BadValue, "boundary tag inconsistent with subdomain");
    }
    if (subdomain == SubdomainId::Poro &&
        (tags.primary[s] == BoundaryTag::Interface) != (tags.pressure[s] == BoundaryTag::Interface)) {
      throw Error(ErrorKind::BadValue, "interface side must be tagged for both poro fields");
    }
  }

  SubdomainMesh mesh;
  mesh.subdomain = subdomain;
  mesh.rect = rect;
  mesh.nx = nx;
  mesh.ny = ny;

  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    // Endpoints are assigned exactly so shared sides match bit-for-bit.
    const double y = j == ny ? rect.y1 : rect.y0 + (rect.y1 - rect.y0) * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? rect.x1 : rect.x0 + (rect.x1 - rect.x0) * i / nx;
      mesh.vertices.push_back({x, y});
    }
  }

  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  std::map<std::pair<int, int>, int> edge_index;
  std::vector<int> edge_count;
  std::vector<std::pair<int, int>> edge_owner;  // first (triangle, local edge)
  mesh.triangle_edges.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3];
      int b = tri[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_index.try_emplace({a, b}, static_cast<int>(mesh.edges.size()));
      if (inserted) {
        mesh.edges.push_back({a, b});
        edge_count.push_back(0);
        edge_owner.emplace_back(static_cast<int>(t), k);
      }
      ++edge_count[static_cast<std::size_t>(it->second)];
      mesh.triangle_edges[t][k] = it->second;
    }
  }

  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    if (edge_count[e] != 1) continue;
    const Vec2 a = mesh.vertices[mesh.edges[e][0]];
    const Vec2 b = mesh.vertices[mesh.edges[e][1]];
    Side side;
    if (a.y == rect.y0 && b.y == rect.y0) side = Side::Bottom;
    else if (a.x == rect.x1 && b.x == rect.x1) side = Side::Right;
    else if (a.y == rect.y1 && b.y == rect.y1) side = Side::Top;
    else side = Side::Left;
    BoundaryEdge be;
    be.vertices = mesh.edges[e];
    be.triangle = edge_owner[e].first;
    be.local_edge = edge_owner[e].second;
    be.side = side;
    be.primary_tag = tags.primary[static_cast<int>(side)];
    be.pressure_tag = subdomain == SubdomainId::Fluid ? be.primary_tag
                                                      : tags.pressure[static_cast<int>(side)];
    mesh.boundary_edges.push_back(be);
  }
  return mesh;
}

double InterfaceMesh::length() const {
  double total = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) total += segment_length(static_cast<int>(s));
  return total;
}

double InterfaceMesh::segment_length(int s) const {
  const auto& seg = segments[static_cast<std::size_t>(s)];
  return norm(vertices[seg[1]] - vertices[seg[0]]);
}

double InterfaceMesh::arclength(Vec2 p) const { return dot(p - vertices.front(), tau); }

namespace {

struct TraceEdge {
  Vec2 a;
  Vec2 b;
  InterfaceAdjacency adjacency;
};

std::vector<TraceEdge> interface_trace(const SubdomainMesh& mesh, const InterfaceLine& gamma,
                                       Vec2 tau) {
  const bool horizontal = gamma.a.y == gamma.b.y;
  const double lo = std::min(dot(gamma.a, tau), dot(gamma.b, tau));
  const double hi = std::max(dot(gamma.a, tau), dot(gamma.b, tau));
  std::vector<TraceEdge> out;
  for (const auto& be : mesh.boundary_edges) {
    if (be.primary_tag != BoundaryTag::Interface) continue;
    Vec2 a = mesh.vertices[be.vertices[0]];
    Vec2 b = mesh.vertices[be.vertices[1]];
    const bool on_line = horizontal ? (a.y == gamma.a.y && b.y == gamma.a.y)
                                    : (a.x == gamma.a.x && b.x == gamma.a.x);
    const bool inside = dot(a, tau) >= lo && dot(a, tau) <= hi && dot(b, tau) >= lo &&
                        dot(b, tau) <= hi;
    if (!on_line || !inside) {
      throw Error(ErrorKind::NotOnLine, "interface-tagged edge is not on the interface line");
    }
    if (dot(b - a, tau) < 0) std::swap(a, b);
    out.push_back({a, b, {be.triangle, be.local_edge}});
  }
  std::sort(out.begin(), out.end(),
            [tau](const TraceEdge& l, const TraceEdge& r) { return dot(l.a, tau) < dot(r.a, tau); });
  return out;
}

Vec2 rect_center(const Rect& r) { return {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)}; }

}  // namespace

InterfaceMesh extract_interface(const SubdomainMesh& mesh_f, const SubdomainMesh& mesh_p,
                                const InterfaceLine& gamma) {
  const bool horizontal = gamma.a.y == gamma.b.y;
  const bool vertical = gamma.a.x == gamma.b.x;
  if (horizontal == vertical) {
    throw Error(ErrorKind::NotOnLine, "interface line must be axis-aligned and non-degenerate");
  }
  InterfaceMesh im;
  im.tau = horizontal ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  const Vec2 normal = horizontal ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
  const Vec2 to_poro = rect_center(mesh_p.rect) - rect_center(mesh_f.rect);
  im.n_f = dot(normal, to_poro) > 0 ? normal : -normal;
  im.n_p = -im.n_f;

  const auto tf = interface_trace(mesh_f, gamma, im.tau);
  const auto tp = interface_trace(mesh_p, gamma, im.tau);
  if (tf.empty() || tf.size() != tp.size()) {
    throw Error(ErrorKind::NonMatching, "fluid and poro interface traces differ in size");
  }
  for (std::size_t s = 0; s < tf.size(); ++s) {
    if (!(tf[s].a == tp[s].a) || !(tf[s].b == tp[s].b)) {
      throw Error(ErrorKind::NonMatching, "fluid and poro interface vertices differ");
    }
    if (s > 0 && !(tf[s].a == tf[s - 1].b)) {
      throw Error(ErrorKind::NonMatching, "interface trace is not connected");
    }
  }
  // Outward normal check against the adjacent fluid triangle.
  {
    const auto verts = mesh_f.triangle_vertices(tf.front().adjacency.triangle);
    const Vec2 opposite = verts[static_cast<std::size_t>(tf.front().adjacency.local_edge)];
    if (dot(opposite - tf.front().a, im.n_f) >= 0) {
      throw Error(ErrorKind::OrientationError, "fluid normal does not point out of the fluid");
    }
  }

  im.vertices.push_back(tf.front().a);
  for (std::size_t s = 0; s < tf.size(); ++s) {
    im.vertices.push_back(tf[s].b);
    im.segments.push_back({static_cast<int>(s), static_cast<int>(s + 1)});
    im.f_edge_map.push_back(tf[s].adjacency);
    im.p_edge_map.push_back(tp[s].adjacency);
  }
  return im;
}

InterfaceLine shared_side(const Rect& f, const Rect& p) {
  if (f.y1 == p.y0 || f.y0 == p.y1) {
    const double y = f.y1 == p.y0 ? f.y1 : f.y0;
    const double a = std::max(f.x0, p.x0), b = std::min(f.x1, p.x1);
    if (b > a) return {{a, y}, {b, y}};
  }
  if (f.x1 == p.x0 || f.x0 == p.x1) {
    const double x = f.x1 == p.x0 ? f.x1 : f.x0;
    const double a = std::max(f.y0, p.y0), b = std::min(f.y1, p.y1);
    if (b > a) return {{x, a}, {x, b}};
  }
  throw Error(ErrorKind::InvalidRect, "rectangles do not share a side");
}

TagSpec standard_tags(const Rect& own, const Rect& other, SubdomainId subdomain) {
  Side shared;
  if (own.y1 == other.y0) shared = Side::Top;
  else if (own.y0 == other.y1) shared = Side::Bottom;
  else if (own.x1 == other.x0) shared = Side::Right;
  else if (own.x0 == other.x1) shared = Side::Left;
  else throw Error(ErrorKind::InvalidRect, "rectangles do not share a side");
  const int s = static_cast<int>(shared);
  const int opposite = (s + 2) % 4;
  const bool fluid = subdomain == SubdomainId::Fluid;
  TagSpec spec;
  for (int k = 0; k < 4; ++k) {
    if (k == s) {
      spec.primary[k] = BoundaryTag::Interface;
      spec.pressure[k] = BoundaryTag::Interface;
    } else if (k == opposite) {
      spec.primary[k] = fluid ? BoundaryTag::NeumannF : BoundaryTag::NeumannS;
      spec.pressure[k] = fluid ? BoundaryTag::NeumannF : BoundaryTag::NeumannP;
    } else {
      spec.primary[k] = fluid ? BoundaryTag::DirichletF : BoundaryTag::DirichletS;
      spec.pressure[k] = fluid ? BoundaryTag::DirichletF : BoundaryTag::DirichletP;
    }
  }
  return spec;
}

Geometry build_geometry(const Rect& fluid, const Rect& poro, int nx, int ny) {
  auto mf = std::make_shared<SubdomainMesh>(
      build_rect_mesh(fluid, nx, ny, SubdomainId::Fluid, standard_tags(fluid, poro, SubdomainId::Fluid)));
  auto mp = std::make_shared<SubdomainMesh>(
      build_rect_mesh(poro, nx, ny, SubdomainId::Poro, standard_tags(poro, fluid, SubdomainId::Poro)));
  auto im = std::make_shared<InterfaceMesh>(extract_interface(*mf, *mp, shared_side(fluid, poro)));
  return {std::move(mf), std::move(mp), std::move(im)};
}

Geometry standard_geometry(int n) {
  return build_geometry({0.0, 0.0, 1.0, 1.0}, {0.0, 1.0, 1.0, 2.0}, n, n);
}

}  // namespace fpsi
